//! Group inverse: exists exactly for index-1 matrices (rank A = rank A^2),
//! computed through a full-rank factorization.

use wmpinv::geninv::group_inverse;
use wmpinv::norms::commutator_gap;
use wmpinv::testkit::{random_index_one, GenSpec};
use wmpinv::{CMatrix, DEFAULT_TOL};

fn main() {
    // an idempotent is its own group inverse
    let idem = CMatrix::from_real_rows(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    let g = group_inverse(&idem, DEFAULT_TOL).unwrap();
    println!(
        "idempotent: exists = {}, sharp = {:?}",
        g.exists,
        g.sharp.as_ref().unwrap()
    );

    // a nilpotent matrix has rank A = 1 but rank A^2 = 0: no group inverse
    let nilp = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let g = group_inverse(&nilp, DEFAULT_TOL).unwrap();
    println!(
        "nilpotent: exists = {} (rank A = {}, rank A^2 = {})",
        g.exists, g.rank_a, g.rank_a2
    );
    assert!(!g.exists);

    // generated index-1 matrices always have one, and it commutes
    for seed in 0..5 {
        let a = random_index_one(&GenSpec::new(5, 3, 50.0, seed));
        let g = group_inverse(&a, DEFAULT_TOL).unwrap();
        let sharp = g.sharp.unwrap();
        println!(
            "seed {seed}: rank {} commutator gap {:.3e}",
            g.rank_a,
            commutator_gap(&a, &sharp)
        );
    }
}
