//! Acceptance suite. Every criterion runs at its stated tolerance on the
//! stated corpus size and prints one pass/fail line; any assertion failure
//! fails the build.
//!
//! The shared corpus (criteria 1-4) is 1000 seeded instances with
//! dimensions 2..=8, ranks 0..=n, matrix condition <= 1e4 and weight
//! conditions <= 1e3.

use std::time::Instant;
use wmpinv::cli::{battery_instance, block_instance, lift_instance, penrose_instance};
use wmpinv::ep::{
    characterization_battery, invertible_factor_witness, spectral_pinv_witness, ClauseParams,
    Consensus,
};
use wmpinv::error::Error;
use wmpinv::geninv::{
    pinv_from_projectors, projectors_of, reverse_weights_identity_check, weighted_pinv, Weight,
};
use wmpinv::hermitian::{is_banach_hermitian, DEFAULT_STEPS, DEFAULT_T_MAX};
use wmpinv::linalg::svd_pinv;
use wmpinv::norms::{rel_gap, NormKind};
use wmpinv::structure::{lift_gap, quotient_gaps, restriction_gaps};
use wmpinv::testkit::oracle_penrose_solve_2x2;
use wmpinv::{CMatrix, DEFAULT_TOL};

const CORPUS: u64 = 1000;

fn m2(e: [f64; 4]) -> CMatrix {
    CMatrix::from_real_rows(2, 2, &e)
}

#[test]
fn acceptance_01_penrose_residuals() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..CORPUS {
        let (a, e, f) = penrose_instance(seed, None);
        let r = weighted_pinv(&a, &e, &f, 1e-8)
            .unwrap_or_else(|err| panic!("seed {seed}: weighted inverse failed: {err}"));
        for &res in &r.residuals {
            worst = worst.max(res);
            assert!(res <= 1e-8, "seed {seed}: residual {res:.3e} above 1e-8");
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "corpus run took {elapsed:?}, budget 10 s"
    );
    println!(
        "acceptance 01 (penrose residuals): PASS - 1000/1000 within 1e-8, worst {worst:.3e}, {elapsed:?}"
    );
}

#[test]
fn acceptance_02_uniqueness_cross_path() {
    let mut worst = 0.0f64;
    for seed in 0..CORPUS {
        let (a, e, f) = penrose_instance(seed, None);
        let formula = weighted_pinv(&a, &e, &f, DEFAULT_TOL).unwrap();
        let (p, q) = projectors_of(&a, &e, &f, DEFAULT_TOL).unwrap();
        let s = pinv_from_projectors(&a, &p, &q, DEFAULT_TOL).unwrap();
        let gap = rel_gap(&s, &formula.b);
        worst = worst.max(gap);
        assert!(gap <= 1e-9, "seed {seed}: route gap {gap:.3e} above 1e-9");
    }
    println!(
        "acceptance 02 (uniqueness cross-path): PASS - 1000/1000 within 1e-9, worst {worst:.3e}"
    );
}

#[test]
fn acceptance_03_weight_involution() {
    for seed in 0..CORPUS {
        let (a, e, f) = penrose_instance(seed, None);
        assert!(
            reverse_weights_identity_check(&a, &e, &f, 1e-9)
                .unwrap_or_else(|err| panic!("seed {seed}: {err}")),
            "seed {seed}: double application with swapped weights left A"
        );
    }
    println!("acceptance 03 (weight involution): PASS - 1000/1000 within 1e-9");
}

#[test]
fn acceptance_04_reductions() {
    let mut worst_unit = 0.0f64;
    let mut worst_similarity = 0.0f64;
    for seed in 0..CORPUS {
        let (a, e, _f) = penrose_instance(seed, None);
        let n = a.rows();
        let id = Weight::identity(n);
        let unit = weighted_pinv(&a, &id, &id, DEFAULT_TOL).unwrap().b;
        let plain = svd_pinv(&a, DEFAULT_TOL);
        let gap = rel_gap(&unit, &plain);
        worst_unit = worst_unit.max(gap);
        assert!(gap <= 1e-11, "seed {seed}: unit-weight gap {gap:.3e}");

        let equal = weighted_pinv(&a, &e, &e, DEFAULT_TOL).unwrap().b;
        let direct =
            &(e.inv_sqrt() * &svd_pinv(&(&(e.sqrt() * &a) * e.inv_sqrt()), DEFAULT_TOL)) * e.sqrt();
        let gap = rel_gap(&equal, &direct);
        worst_similarity = worst_similarity.max(gap);
        assert!(gap <= 1e-9, "seed {seed}: equal-weight gap {gap:.3e}");
    }
    println!(
        "acceptance 04 (reductions): PASS - unit-weight worst {worst_unit:.3e} (<= 1e-11), equal-weight worst {worst_similarity:.3e} (<= 1e-9)"
    );
}

#[test]
fn acceptance_05_lift_theorem() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let (a, e, f) = lift_instance(seed, None);
        assert!(a.rows() <= 6);
        let gap = lift_gap(&a, &e, &f, 1e-8)
            .unwrap_or_else(|err| panic!("seed {seed}: lift inverse failed: {err}"));
        worst = worst.max(gap);
        assert!(gap <= 1e-8, "seed {seed}: lift gap {gap:.3e}");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "lift corpus took {elapsed:?}, budget 30 s"
    );
    println!("acceptance 05 (lift theorem): PASS - 200/200 within 1e-8, worst {worst:.3e}, {elapsed:?}");
}

#[test]
fn acceptance_06_restriction_and_quotient() {
    let mut worst_inverse = 0.0f64;
    let mut worst_sqrt = 0.0f64;
    for seed in 0..200u64 {
        let (tm, em, fm) = block_instance(seed, None);
        assert!(tm.dim() <= 8);
        let (rg, rs) = restriction_gaps(&tm, &em, &fm, 1e-8)
            .unwrap_or_else(|err| panic!("seed {seed}: restriction hypothesis failed: {err}"));
        let (qg, qs) = quotient_gaps(&tm, &em, &fm, 1e-8)
            .unwrap_or_else(|err| panic!("seed {seed}: quotient hypothesis failed: {err}"));
        worst_inverse = worst_inverse.max(rg).max(qg);
        worst_sqrt = worst_sqrt.max(rs).max(qs);
        assert!(rg <= 1e-8 && qg <= 1e-8, "seed {seed}: gaps {rg:.3e}, {qg:.3e}");
        assert!(
            rs <= 1e-10 && qs <= 1e-10,
            "seed {seed}: square-root block gaps {rs:.3e}, {qs:.3e}"
        );
    }
    println!(
        "acceptance 06 (restriction/quotient): PASS - 200/200, worst inverse gap {worst_inverse:.3e} (<= 1e-8), worst sqrt gap {worst_sqrt:.3e} (<= 1e-10)"
    );
}

#[test]
fn acceptance_07_clause_consensus() {
    let start = Instant::now();
    let params = ClauseParams::default();
    let mut all_true = 0usize;
    let mut all_false = 0usize;
    for seed in 0..1000u64 {
        // even seeds are constructed weighted-EP triples, odd seeds generic
        // index-1 matrices with unrelated weights: 500 of each
        let (a, e, f) = battery_instance(seed, None);
        let report = characterization_battery(&a, &e, &f, &params)
            .unwrap_or_else(|err| panic!("seed {seed}: battery failed: {err}"));
        assert_ne!(
            report.consensus,
            Consensus::Mixed,
            "seed {seed}: mixed consensus, disagreeing {:?}",
            report.disagreeing
        );
        assert_eq!(
            report.ep_verdict,
            report.consensus == Consensus::AllTrue,
            "seed {seed}: verdict does not match consensus"
        );
        match report.consensus {
            Consensus::AllTrue => all_true += 1,
            Consensus::AllFalse => all_false += 1,
            Consensus::Mixed => unreachable!(),
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "battery corpus took {elapsed:?}, budget 60 s"
    );
    println!(
        "acceptance 07 (clause consensus): PASS - 1000/1000 never mixed at 1e-8 ({all_true} all-true, {all_false} all-false), {elapsed:?}"
    );
}

#[test]
fn acceptance_08_ep_witnesses() {
    let mut checked = 0usize;
    let mut defective = 0usize;
    for seed in 0..1000u64 {
        if seed % 2 != 0 {
            continue; // constructed weighted-EP triples only
        }
        let (a, e, f) = battery_instance(seed, None);
        invertible_factor_witness(&a, &e, &f, 1e-8)
            .unwrap_or_else(|err| panic!("seed {seed}: invertible-factor witness failed: {err}"));
        match spectral_pinv_witness(&a, &e, &f, 1e-7) {
            Ok(_) => checked += 1,
            Err(Error::Defective { .. }) => defective += 1,
            Err(err) => panic!("seed {seed}: polynomial witness failed: {err}"),
        }
    }
    println!(
        "acceptance 08 (ep witnesses): PASS - invertible factors on 500/500, polynomial witness on {checked} diagonalizable instances ({defective} defective skipped)"
    );
}

#[test]
fn acceptance_09_hermiticity_agreement() {
    for seed in 0..1000u64 {
        // even seeds exactly hermitian, odd generic: 500 of each
        let a = wmpinv::cli::hermitian_instance(seed, None);
        let report =
            is_banach_hermitian(&a, NormKind::Two, DEFAULT_T_MAX, DEFAULT_STEPS, DEFAULT_TOL)
                .unwrap_or_else(|err| panic!("seed {seed}: criteria disagree: {err}"));
        assert_eq!(report.verdict, seed % 2 == 0, "seed {seed}");
    }

    // the shift matrix peaks at the golden ratio at t = 1
    let shift = m2([0.0, 1.0, 0.0, 0.0]);
    let report =
        is_banach_hermitian(&shift, NormKind::Two, 1.0, DEFAULT_STEPS, DEFAULT_TOL).unwrap();
    assert!(!report.verdict);
    let expected = (1.0 + 5f64.sqrt()) / 2.0 - 1.0;
    assert!(
        (report.max_deviation - expected).abs() <= 1e-6,
        "deviation {:.9} vs expected {expected:.9}",
        report.max_deviation
    );
    println!(
        "acceptance 09 (hermiticity): PASS - 1000/1000 grid/exact agreement, shift deviation {:.9} within 1e-6 of {expected:.9}",
        report.max_deviation
    );
}

#[test]
fn acceptance_10_hand_derived_values() {
    // shift matrix with diagonal weights
    let a1 = m2([0.0, 1.0, 0.0, 0.0]);
    let e1 = Weight::new(CMatrix::from_real_diagonal(&[1.0, 4.0])).unwrap();
    let f1 = Weight::new(CMatrix::from_real_diagonal(&[9.0, 1.0])).unwrap();
    let expected1 = m2([0.0, 0.0, 1.0, 0.0]);
    let b1 = weighted_pinv(&a1, &e1, &f1, DEFAULT_TOL).unwrap().b;
    assert!(b1.max_abs_diff(&expected1) <= 1e-12);
    let o1 = oracle_penrose_solve_2x2(&a1, &e1, &f1).unwrap();
    assert!(o1.max_abs_diff(&expected1) <= 1e-12);

    // rank-one projector with a coupled left weight
    let a2 = m2([1.0, 0.0, 0.0, 0.0]);
    let e2 = Weight::new(m2([2.0, 1.0, 1.0, 1.0])).unwrap();
    let f2 = Weight::identity(2);
    let expected2 = m2([1.0, 0.5, 0.0, 0.0]);
    let b2 = weighted_pinv(&a2, &e2, &f2, DEFAULT_TOL).unwrap().b;
    assert!(b2.max_abs_diff(&expected2) <= 1e-12);
    let o2 = oracle_penrose_solve_2x2(&a2, &e2, &f2).unwrap();
    assert!(o2.max_abs_diff(&expected2) <= 1e-12);

    // the projector route reproduces the same closed form
    let (p, q) = projectors_of(&a2, &e2, &f2, DEFAULT_TOL).unwrap();
    assert!(p.max_abs_diff(&m2([1.0, 0.5, 0.0, 0.0])) <= 1e-12);
    assert!(q.max_abs_diff(&m2([1.0, 0.0, 0.0, 0.0])) <= 1e-12);
    let s = pinv_from_projectors(&a2, &p, &q, DEFAULT_TOL).unwrap();
    assert!(s.max_abs_diff(&expected2) <= 1e-12);

    println!(
        "acceptance 10 (hand-derived values): PASS - three closed forms reproduced to 1e-12 and confirmed by the 2x2 oracle"
    );
}
