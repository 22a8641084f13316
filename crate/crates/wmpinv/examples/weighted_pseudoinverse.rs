//! Weighted Moore-Penrose inverse along both routes: the square-root
//! conjugation formula and the projector-pair construction. Uniqueness of
//! the weighted inverse makes route agreement a hard check, and swapping
//! the weights inverts the operation.

use wmpinv::geninv::{
    pinv_from_projectors, projectors_of, reverse_weights_identity_check, weighted_pinv, Weight,
};
use wmpinv::norms::rel_gap;
use wmpinv::{CMatrix, DEFAULT_TOL};

fn main() {
    let a = CMatrix::from_real_rows(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let e = Weight::new(CMatrix::from_real_rows(2, 2, &[2.0, 1.0, 1.0, 1.0])).unwrap();
    let f = Weight::identity(2);

    // route 1: B = F^(-1/2) (E^(1/2) A F^(-1/2))+ E^(1/2)
    let result = weighted_pinv(&a, &e, &f, DEFAULT_TOL).unwrap();
    println!("formula route B = {:?}", result.b);
    println!("condition residuals: {:?}", result.residuals);

    // route 2: from the idempotent pair alone
    let (p, q) = projectors_of(&a, &e, &f, DEFAULT_TOL).unwrap();
    println!("range projector  P = A B = {p:?}");
    println!("cokernel projector Q = B A = {q:?}");
    let s = pinv_from_projectors(&a, &p, &q, DEFAULT_TOL).unwrap();
    println!("projector route S = {s:?}");

    let gap = rel_gap(&s, &result.b);
    println!("route agreement gap = {gap:.3e}");
    assert!(gap <= 1e-9);

    // weight swap is an involution: (B with E,F) then (.. with F,E) returns A
    assert!(reverse_weights_identity_check(&a, &e, &f, DEFAULT_TOL).unwrap());
    println!("swapped-weights double inverse returned A");

    // with unit weights everything reduces to the plain Moore-Penrose inverse
    let id = Weight::identity(2);
    let plain = weighted_pinv(&a, &id, &id, DEFAULT_TOL).unwrap();
    println!("unit-weight inverse = {:?}", plain.b);
}
