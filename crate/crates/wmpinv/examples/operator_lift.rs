//! The left-multiplication lift: a matrix acting on the matrix algebra by
//! X -> AX becomes an n^2-dimensional operator. The lift is an algebra
//! homomorphism, preserves the spectral norm, and commutes with weighted
//! pseudoinversion (computed honestly in the big algebra).

use wmpinv::norms::{rel_gap, spectral_norm};
use wmpinv::structure::{left_mult_lift, lift_gap, vec_cols};
use wmpinv::testkit::{random_fixed_rank, random_hpd, GenSpec};
use wmpinv::{CMatrix, DEFAULT_TOL};

fn main() {
    let a = CMatrix::from_real_rows(2, 2, &[1.0, 2.0, 3.0, 4.0]);
    let b = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, -1.0, 0.5]);

    // homomorphism: lift(AB) = lift(A) lift(B)
    let lift_ab = left_mult_lift(&(&a * &b)).l;
    let product = &left_mult_lift(&a).l * &left_mult_lift(&b).l;
    println!("homomorphism gap: {:.3e}", rel_gap(&lift_ab, &product));

    // isometry in the spectral norm
    println!(
        "|A| = {:.6}, |lift(A)| = {:.6}",
        spectral_norm(&a),
        spectral_norm(&left_mult_lift(&a).l)
    );

    // the lift reproduces left multiplication on vectorized matrices
    let x = CMatrix::from_real_rows(2, 2, &[1.0, 0.0, 2.0, -1.0]);
    let lhs = &left_mult_lift(&a).l * &vec_cols(&x);
    let rhs = vec_cols(&(&a * &x));
    println!("vectorization gap: {:.3e}", lhs.max_abs_diff(&rhs));

    // weighted inverse commutes with the lift, checked in the big algebra
    for seed in 0..3 {
        let a = random_fixed_rank(&GenSpec::new(4, 2, 100.0, seed));
        let e = random_hpd(&GenSpec::new(4, 4, 30.0, seed + 100));
        let f = random_hpd(&GenSpec::new(4, 4, 30.0, seed + 200));
        let gap = lift_gap(&a, &e, &f, DEFAULT_TOL).unwrap();
        println!("seed {seed}: 16-dimensional lift inverse gap = {gap:.3e}");
    }
}
