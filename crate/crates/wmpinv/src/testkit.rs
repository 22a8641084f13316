//! Deterministic instance generators and the closed-form 2x2 oracle.
//!
//! Randomness comes from ChaCha8 seeded per instance (counter-based, stable
//! across platforms) with normals via Box-Muller, so a `GenSpec` pins its
//! output bit-for-bit on a given platform. Spectra are shaped directly
//! (Haar unitary factors times log-uniform singular values or eigenvalues
//! with pinned endpoints) so condition caps hold by construction.

use crate::error::{Error, Result};
use crate::geninv::Weight;
use crate::hermitian::complex_gaussian;
use crate::matrix::CMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Condition cap for the similarity bases of index-1 and weighted-EP
/// instances.
const BASIS_COND: f64 = 10.0;
/// Condition cap for invertible cores and weight blocks.
const CORE_COND: f64 = 50.0;

/// Instance recipe: dimension, rank, condition target and seed.
/// Identical specs produce identical output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub rank: usize,
    pub cond_target: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, rank: usize, cond_target: f64, seed: u64) -> Self {
        assert!(rank <= n, "rank {rank} exceeds dimension {n}");
        assert!(cond_target >= 1.0, "condition target must be >= 1");
        GenSpec {
            n,
            rank,
            cond_target,
            seed,
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Matrix of iid standard complex Gaussians.
pub fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let entries: Vec<Complex64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    CMatrix::from_rows(rows, cols, entries)
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of the
/// R diagonal folded into Q.
pub fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = ginibre(n, n, rng);
    let qr = g.as_dmatrix().clone().qr();
    let q = CMatrix::from_dmatrix(qr.q());
    let r = qr.r();
    let phases: Vec<Complex64> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                Complex64::ONE
            } else {
                d / d.norm()
            }
        })
        .collect();
    &q * &CMatrix::from_diagonal(&phases)
}

/// Log-uniform values in [1, cond] with both endpoints pinned, so the
/// spread is exactly `cond` whenever k >= 2.
fn shaped_spectrum(k: usize, cond: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match k {
        0 => vec![],
        1 => vec![1.0],
        _ => {
            let mut s = Vec::with_capacity(k);
            s.push(cond);
            for _ in 0..k - 2 {
                s.push(cond.powf(rng.gen::<f64>()));
            }
            s.push(1.0);
            s
        }
    }
}

/// Invertible matrix with singular values log-uniform in [1, cond].
pub fn shaped_invertible(n: usize, cond: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    let u = haar_unitary(n, rng);
    let v = haar_unitary(n, rng);
    let s = CMatrix::from_real_diagonal(&shaped_spectrum(n, cond, rng));
    &(&u * &s) * &v.adjoint()
}

/// Random hermitian positive definite weight `Q D Q*` with log-uniform
/// spectrum in [1, cond_target]. Requires `spec.rank == spec.n`.
pub fn random_hpd(spec: &GenSpec) -> Weight {
    assert_eq!(spec.rank, spec.n, "a weight must have full rank");
    let mut rng = spec.rng();
    let q = haar_unitary(spec.n, &mut rng);
    let d = CMatrix::from_real_diagonal(&shaped_spectrum(spec.n, spec.cond_target, &mut rng));
    let w = (&(&q * &d) * &q.adjoint()).hermitian_part();
    Weight::new(w).expect("constructed weight is positive definite")
}

/// Matrix of exact rank `spec.rank`: a product of shaped full-rank n x r
/// and r x n factors with nonzero singular values log-uniform in
/// [1, cond_target].
pub fn random_fixed_rank(spec: &GenSpec) -> CMatrix {
    let (n, r) = (spec.n, spec.rank);
    if r == 0 {
        return CMatrix::zeros(n, n);
    }
    let mut rng = spec.rng();
    let u = haar_unitary(n, &mut rng);
    let v = haar_unitary(n, &mut rng);
    let sigma = shaped_spectrum(r, spec.cond_target, &mut rng);
    let left = CMatrix::from_fn(n, r, |i, j| u.get(i, j) * sigma[j].sqrt());
    let right = CMatrix::from_fn(r, n, |i, j| v.get(j, i).conj() * sigma[i].sqrt());
    &left * &right
}

/// Index-1 matrix `S blockdiag(C, 0) S^-1` with invertible core C
/// (condition <= cond_target) and mildly conditioned basis S; its group
/// inverse always exists.
pub fn random_index_one(spec: &GenSpec) -> CMatrix {
    let (n, r) = (spec.n, spec.rank);
    if r == 0 {
        return CMatrix::zeros(n, n);
    }
    let mut rng = spec.rng();
    let s = shaped_invertible(n, BASIS_COND, &mut rng);
    let c = shaped_invertible(r, spec.cond_target, &mut rng);
    let core = CMatrix::block_diag(&[&c, &CMatrix::zeros(n - r, n - r)]);
    let s_inv = s.try_inverse().expect("shaped basis is invertible");
    &(&s * &core) * &s_inv
}

/// Weighted-EP triple: in a random basis S the matrix is
/// `blockdiag(C, 0)` and both weights are congruences
/// `S^-* blockdiag(W1, W2) S^-1`, which makes the range/null splitting
/// projector hermitian in both weighted algebras.
pub fn random_weighted_ep(n: usize, r: usize, seed: u64) -> (CMatrix, Weight, Weight) {
    assert!(r <= n, "rank {r} exceeds dimension {n}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = shaped_invertible(n, BASIS_COND, &mut rng);
    let s_inv = s.try_inverse().expect("shaped basis is invertible");

    let a = if r == 0 {
        CMatrix::zeros(n, n)
    } else {
        let c = shaped_invertible(r, CORE_COND, &mut rng);
        let core = CMatrix::block_diag(&[&c, &CMatrix::zeros(n - r, n - r)]);
        &(&s * &core) * &s_inv
    };

    let congruent_weight = |rng: &mut ChaCha8Rng| {
        let blocks: Vec<CMatrix> = [r, n - r]
            .iter()
            .filter(|&&k| k > 0)
            .map(|&k| {
                let q = haar_unitary(k, rng);
                let d = CMatrix::from_real_diagonal(&shaped_spectrum(k, CORE_COND, rng));
                (&(&q * &d) * &q.adjoint()).hermitian_part()
            })
            .collect();
        let refs: Vec<&CMatrix> = blocks.iter().collect();
        let inner = CMatrix::block_diag(&refs);
        let w = (&(&s_inv.adjoint() * &inner) * &s_inv).hermitian_part();
        Weight::new(w).expect("congruence of a positive definite matrix is positive definite")
    };
    let e = congruent_weight(&mut rng);
    let f = congruent_weight(&mut rng);
    (a, e, f)
}

/// Closed-form 2x2 weighted Moore-Penrose inverse, independent of the SVD
/// route: rank 2 by the determinant inverse, rank 1 by eliminating the
/// defining conditions on a rank-1 parameterization `B = beta F^-1 v (E u)*`.
pub fn oracle_penrose_solve_2x2(a: &CMatrix, e: &Weight, f: &Weight) -> Result<CMatrix> {
    if a.rows() != 2 || a.cols() != 2 || e.dim() != 2 || f.dim() != 2 {
        return Err(Error::DimensionMismatch(
            "the closed-form oracle only handles 2x2 instances".into(),
        ));
    }
    let scale = a.max_abs_entry();
    if scale == 0.0 {
        return Ok(CMatrix::zeros(2, 2));
    }
    let det = a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0);
    if det.norm() > 1e-10 * scale * scale {
        return Ok(inv2(a));
    }

    // rank 1: A = u v*, with u the heavier column and v = A* u / (u* u)
    let col = |j: usize| [a.get(0, j), a.get(1, j)];
    let nsq = |x: &[Complex64; 2]| x[0].norm_sqr() + x[1].norm_sqr();
    let (c0, c1) = (col(0), col(1));
    let u = if nsq(&c0) >= nsq(&c1) { c0 } else { c1 };
    let uu = nsq(&u);
    let v = [
        (a.get(0, 0).conj() * u[0] + a.get(1, 0).conj() * u[1]) / uu,
        (a.get(0, 1).conj() * u[0] + a.get(1, 1).conj() * u[1]) / uu,
    ];
    let recon = CMatrix::from_rows(
        2,
        2,
        vec![
            u[0] * v[0].conj(),
            u[0] * v[1].conj(),
            u[1] * v[0].conj(),
            u[1] * v[1].conj(),
        ],
    );
    if recon.max_abs_diff(a) > 1e-8 * scale {
        return Err(Error::NoSolution(
            "numerical rank of the 2x2 instance is ambiguous".into(),
        ));
    }

    let eu = mat_vec(e.matrix(), &u);
    let f_inv = inv2(f.matrix());
    let fv = mat_vec(&f_inv, &v);
    let u_eu = (u[0].conj() * eu[0] + u[1].conj() * eu[1]).re;
    let v_fv = (v[0].conj() * fv[0] + v[1].conj() * fv[1]).re;
    let denom = u_eu * v_fv;
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::NoSolution(format!(
            "eliminator degenerated: positive denominators were {u_eu:.3e} and {v_fv:.3e}"
        )));
    }
    let beta = 1.0 / denom;
    Ok(CMatrix::from_rows(
        2,
        2,
        vec![
            fv[0] * eu[0].conj() * beta,
            fv[0] * eu[1].conj() * beta,
            fv[1] * eu[0].conj() * beta,
            fv[1] * eu[1].conj() * beta,
        ],
    ))
}

fn inv2(m: &CMatrix) -> CMatrix {
    let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
    CMatrix::from_rows(
        2,
        2,
        vec![
            m.get(1, 1) / det,
            -m.get(0, 1) / det,
            -m.get(1, 0) / det,
            m.get(0, 0) / det,
        ],
    )
}

fn mat_vec(m: &CMatrix, x: &[Complex64; 2]) -> [Complex64; 2] {
    [
        m.get(0, 0) * x[0] + m.get(0, 1) * x[1],
        m.get(1, 0) * x[0] + m.get(1, 1) * x[1],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geninv::{group_inverse, weighted_pinv};
    use crate::linalg::{eig, rank};
    use crate::norms::{commutator_gap, rel_gap};
    use crate::DEFAULT_TOL;

    #[test]
    fn hpd_with_unit_condition_is_identity() {
        let w = random_hpd(&GenSpec::new(3, 3, 1.0, 5));
        assert!(w.matrix().max_abs_diff(&CMatrix::identity(3)) < 1e-13);
    }

    #[test]
    fn hpd_spectrum_hits_the_condition_target() {
        let w = random_hpd(&GenSpec::new(2, 2, 4.0, 9));
        let sd = eig(w.matrix()).unwrap();
        let mut lams: Vec<f64> = sd.eigenvalues.iter().map(|l| l.re).collect();
        lams.sort_by(f64::total_cmp);
        assert!((lams[0] - 1.0).abs() < 1e-10);
        assert!((lams[1] - 4.0).abs() < 1e-10);
    }

    #[test]
    fn generators_are_deterministic() {
        let spec = GenSpec::new(4, 2, 50.0, 123);
        assert_eq!(random_fixed_rank(&spec), random_fixed_rank(&spec));
        assert_eq!(random_index_one(&spec), random_index_one(&spec));
        let (a1, e1, f1) = random_weighted_ep(4, 2, 77);
        let (a2, e2, f2) = random_weighted_ep(4, 2, 77);
        assert_eq!(a1, a2);
        assert_eq!(e1.matrix(), e2.matrix());
        assert_eq!(f1.matrix(), f2.matrix());
    }

    #[test]
    fn fixed_rank_hits_requested_rank() {
        for r in 0..=4 {
            let a = random_fixed_rank(&GenSpec::new(4, r, 100.0, 31 + r as u64));
            assert_eq!(rank(&a, crate::KERNEL_TOL), r);
        }
    }

    #[test]
    fn index_one_instances_are_group_invertible() {
        for r in 0..=4 {
            let a = random_index_one(&GenSpec::new(4, r, 30.0, 400 + r as u64));
            let g = group_inverse(&a, DEFAULT_TOL).unwrap();
            assert!(g.exists, "rank {r} instance lost its group inverse");
        }
    }

    #[test]
    fn weighted_ep_instances_commute_with_their_inverse() {
        for (n, r, seed) in [(2, 1, 1u64), (4, 2, 2), (5, 5, 3), (6, 0, 4), (3, 2, 5)] {
            let (a, e, f) = random_weighted_ep(n, r, seed);
            let b = weighted_pinv(&a, &e, &f, DEFAULT_TOL).unwrap().b;
            assert!(
                commutator_gap(&a, &b) <= DEFAULT_TOL,
                "instance n={n} r={r} seed={seed} does not commute"
            );
        }
    }

    #[test]
    fn oracle_matches_derived_values() {
        let a = CMatrix::from_real_rows(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let e = Weight::new(CMatrix::from_real_rows(2, 2, &[2.0, 1.0, 1.0, 1.0])).unwrap();
        let f = Weight::identity(2);
        let b = oracle_penrose_solve_2x2(&a, &e, &f).unwrap();
        assert!(b.max_abs_diff(&CMatrix::from_real_rows(2, 2, &[1.0, 0.5, 0.0, 0.0])) < 1e-14);

        let a = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = Weight::new(CMatrix::from_real_diagonal(&[1.0, 4.0])).unwrap();
        let f = Weight::new(CMatrix::from_real_diagonal(&[9.0, 1.0])).unwrap();
        let b = oracle_penrose_solve_2x2(&a, &e, &f).unwrap();
        assert!(b.max_abs_diff(&CMatrix::from_real_rows(2, 2, &[0.0, 0.0, 1.0, 0.0])) < 1e-14);
    }

    #[test]
    fn oracle_inverts_invertible_and_annihilates_zero() {
        let a = CMatrix::from_real_rows(2, 2, &[2.0, 1.0, 0.5, 3.0]);
        let e = Weight::new(CMatrix::from_real_rows(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        let f = Weight::identity(2);
        let b = oracle_penrose_solve_2x2(&a, &e, &f).unwrap();
        assert!(rel_gap(&b, &a.try_inverse().unwrap()) < 1e-13);

        let z = CMatrix::zeros(2, 2);
        assert!(oracle_penrose_solve_2x2(&z, &e, &f).unwrap().is_zero());
    }

    #[test]
    fn oracle_agrees_with_formula_route() {
        for seed in 0..50u64 {
            let r = (seed % 3) as usize;
            let a = random_fixed_rank(&GenSpec::new(2, r, 20.0, seed));
            let e = random_hpd(&GenSpec::new(2, 2, 8.0, seed + 1000));
            let f = random_hpd(&GenSpec::new(2, 2, 5.0, seed + 2000));
            let oracle = oracle_penrose_solve_2x2(&a, &e, &f).unwrap();
            let formula = weighted_pinv(&a, &e, &f, DEFAULT_TOL).unwrap().b;
            assert!(
                rel_gap(&oracle, &formula) < 1e-10,
                "seed {seed}: oracle and formula disagree"
            );
        }
    }
}
