//! Hermiticity as a norm property: a matrix is hermitian in the algebra
//! sense when |exp(itA)| stays at 1 for every real t. The grid test
//! evaluates that on a symmetric grid; for the spectral norm it is
//! cross-checked against plain self-adjointness. Weighted algebras rescale
//! the norm by a positive weight.

use wmpinv::geninv::Weight;
use wmpinv::hermitian::{
    field_of_values_sample, is_banach_hermitian, is_positive, is_weighted_hermitian,
    weighted_norm, DEFAULT_STEPS, DEFAULT_T_MAX,
};
use wmpinv::norms::NormKind;
use wmpinv::{CMatrix, DEFAULT_TOL};

fn main() {
    let symmetric = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let shift = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);

    for (name, a) in [("symmetric", &symmetric), ("shift", &shift)] {
        let r = is_banach_hermitian(a, NormKind::Two, DEFAULT_T_MAX, DEFAULT_STEPS, DEFAULT_TOL)
            .unwrap();
        println!(
            "{name}: verdict {} (max deviation {:.3e}, {:?})",
            r.verdict, r.max_deviation, r.certification
        );
    }

    // the shift matrix peaks at the golden ratio at t = 1
    let r = is_banach_hermitian(&shift, NormKind::Two, 1.0, DEFAULT_STEPS, DEFAULT_TOL).unwrap();
    println!(
        "shift deviation at |t| <= 1: {:.12} (golden ratio - 1 = {:.12})",
        r.max_deviation,
        (1.0 + 5f64.sqrt()) / 2.0 - 1.0
    );

    // positivity = hermitian + spectrum on the nonnegative reals
    println!(
        "diag(1,2) positive: {}",
        is_positive(&CMatrix::from_real_diagonal(&[1.0, 2.0]), NormKind::Two, DEFAULT_TOL).unwrap()
    );
    println!(
        "diag(1,-1) positive: {}",
        is_positive(&CMatrix::from_real_diagonal(&[1.0, -1.0]), NormKind::Two, DEFAULT_TOL)
            .unwrap()
    );

    // weighted norm and weighted hermiticity
    let w = Weight::new(CMatrix::from_real_diagonal(&[1.0, 4.0])).unwrap();
    println!(
        "|shift| = {}, |shift| in the diag(1,4) algebra = {}",
        weighted_norm(&shift, &Weight::identity(2), NormKind::Two).unwrap(),
        weighted_norm(&shift, &w, NormKind::Two).unwrap()
    );
    let x = CMatrix::from_real_rows(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    let coupled = Weight::new(CMatrix::from_real_rows(2, 2, &[1.0, 1.0, 1.0, 2.0])).unwrap();
    println!(
        "x hermitian plainly: {}, hermitian in the coupled algebra: {}",
        is_weighted_hermitian(&x, &Weight::identity(2), DEFAULT_TOL).unwrap(),
        is_weighted_hermitian(&x, &coupled, DEFAULT_TOL).unwrap()
    );

    // numerical-range samples of the shift stay in the half-radius disk
    let s = field_of_values_sample(&shift, 500, 7).unwrap();
    let max_abs = s.samples.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    println!(
        "shift numerical-range samples: max |z| = {max_abs:.6} (disk radius 0.5), max |Im| = {:.3}",
        s.max_imag
    );
}
