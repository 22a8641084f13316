//! Restriction and quotient along an invariant leading block: the weighted
//! inverse of a block equals the block of the weighted inverse, and weight
//! square roots commute with block extraction. Hypotheses (invariance for
//! the matrix and its inverse, block-diagonal weights) are checked and
//! reported, never assumed.

use wmpinv::error::Error;
use wmpinv::structure::{
    restriction_blocks, verify_quotient_theorem, verify_restriction_theorem, BlockModel,
};
use wmpinv::{CMatrix, DEFAULT_TOL};

fn main() {
    // invertible block-upper-triangular matrix: leading coordinate invariant
    let t = CMatrix::from_real_rows(3, 3, &[1.0, 2.0, -1.0, 0.0, 3.0, 0.5, 0.0, 0.0, 2.0]);
    let tm = BlockModel::new(t, 1).unwrap();
    println!("invariance residual: {:.3e}", tm.invariance_residual);
    let (t11, t22) = restriction_blocks(&tm, DEFAULT_TOL).unwrap();
    println!("restriction block {t11:?}");
    println!("quotient block {t22:?}");

    let e = BlockModel::new(
        CMatrix::block_diag(&[
            &CMatrix::identity(1),
            &CMatrix::from_real_rows(2, 2, &[2.0, 1.0, 1.0, 2.0]),
        ]),
        1,
    )
    .unwrap();
    let f = BlockModel::new(CMatrix::from_real_diagonal(&[2.0, 1.0, 3.0]), 1).unwrap();

    println!(
        "restriction compatibility: {}",
        verify_restriction_theorem(&tm, &e, &f, DEFAULT_TOL).unwrap()
    );
    println!(
        "quotient compatibility: {}",
        verify_quotient_theorem(&tm, &e, &f, DEFAULT_TOL).unwrap()
    );

    // a singular coupled instance whose inverse also leaves the block invariant
    let s = CMatrix::from_real_rows(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    let sm = BlockModel::new(s, 1).unwrap();
    let id = BlockModel::new(CMatrix::identity(3), 1).unwrap();
    println!(
        "singular coupled instance: restriction {}, quotient {}",
        verify_restriction_theorem(&sm, &id, &id, DEFAULT_TOL).unwrap(),
        verify_quotient_theorem(&sm, &id, &id, DEFAULT_TOL).unwrap()
    );

    // when the inverse does not leave the block invariant the hypothesis
    // failure is reported as an error, not judged as a theorem failure
    let bad = BlockModel::new(CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]), 1).unwrap();
    let id2 = BlockModel::new(CMatrix::identity(2), 1).unwrap();
    match verify_restriction_theorem(&bad, &id2, &id2, DEFAULT_TOL) {
        Err(Error::NotInvariant { residual, .. }) => {
            println!("hypothesis failure reported: inverse leaves the block by {residual:.3}");
        }
        other => println!("unexpected: {other:?}"),
    }
}
