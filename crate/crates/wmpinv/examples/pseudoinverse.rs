//! Moore-Penrose pseudoinverse basics: computing the inverse, checking the
//! four defining conditions, and rank decisions at a relative cutoff.

use wmpinv::linalg::{rank, svd_pinv};
use wmpinv::norms::{rel_gap, spectral_norm};
use wmpinv::{CMatrix, Complex64, KERNEL_TOL};

fn main() {
    // a rank-1 matrix with complex entries
    let a = CMatrix::from_rows(
        3,
        2,
        vec![
            Complex64::new(1.0, 1.0),
            Complex64::new(2.0, 2.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, -2.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(6.0, 0.0),
        ],
    );
    println!("A = {a:?}");
    println!("rank(A) = {}", rank(&a, KERNEL_TOL));

    let b = svd_pinv(&a, KERNEL_TOL);
    println!("A+ = {b:?}");

    // the four conditions, as relative residuals
    let aba = &(&a * &b) * &a;
    let bab = &(&b * &a) * &b;
    let ab = &a * &b;
    let ba = &b * &a;
    println!(
        "|ABA - A| / |A|      = {:.3e}",
        rel_gap(&aba, &a)
    );
    println!(
        "|BAB - B| / |B|      = {:.3e}",
        rel_gap(&bab, &b)
    );
    println!(
        "|(AB)* - AB| / |AB|  = {:.3e}",
        spectral_norm(&(&ab.adjoint() - &ab)) / spectral_norm(&ab)
    );
    println!(
        "|(BA)* - BA| / |BA|  = {:.3e}",
        spectral_norm(&(&ba.adjoint() - &ba)) / spectral_norm(&ba)
    );

    // rank is invariant under pseudoinversion
    assert_eq!(rank(&a, KERNEL_TOL), rank(&b, KERNEL_TOL));
    println!("rank(A+) = rank(A) confirmed");
}
