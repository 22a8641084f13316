//! Weighted Moore-Penrose inverses (two independent routes) and the group
//! inverse.
//!
//! The formula route conjugates by the weight square roots and delegates to
//! the SVD pseudoinverse; the projector route rebuilds the inverse from the
//! two idempotents alone (zero on the complement of the range projector,
//! inverse of the restricted map on the range). Uniqueness of the weighted
//! inverse makes agreement of the two routes an executable theorem.

use crate::error::{Error, Result};
use crate::hermitian::is_weighted_hermitian;
use crate::linalg::{cond2, rank, same_null, same_range, svd_parts, svd_pinv};
use crate::matrix::CMatrix;
use crate::norms::{commutator_gap, rel_gap, spectral_norm};
use serde::{Deserialize, Serialize};

/// Relative eigenvalue gate below which a candidate weight is rejected.
const WEIGHT_GATE: f64 = 1e-12;
/// Tolerance on the cached square-root identities.
const CACHE_TOL: f64 = 1e-10;

/// A validated hermitian positive definite weight with its principal square
/// root and inverse square root cached at construction.
#[derive(Debug, Clone)]
pub struct Weight {
    w: CMatrix,
    sqrt: CMatrix,
    inv_sqrt: CMatrix,
}

impl Weight {
    /// Validates positivity (min eigenvalue > 1e-12 x max), computes both
    /// square roots from one eigendecomposition and checks the cached
    /// identities `sqrt^2 = W` and `sqrt * inv_sqrt = I` to 1e-10 relative.
    pub fn new(w: CMatrix) -> Result<Weight> {
        let (sqrt, inv_sqrt) = crate::linalg::hpd_sqrt_pair(&w, WEIGHT_GATE)?;
        let n = w.rows();
        if rel_gap(&(&sqrt * &sqrt), &w) > CACHE_TOL {
            return Err(Error::ConvergenceFailure(
                "weight square root failed its defining identity".into(),
            ));
        }
        if rel_gap(&(&sqrt * &inv_sqrt), &CMatrix::identity(n)) > CACHE_TOL {
            return Err(Error::ConvergenceFailure(
                "weight inverse square root failed its defining identity".into(),
            ));
        }
        Ok(Weight { w, sqrt, inv_sqrt })
    }

    /// The unit weight; square roots are exact identity matrices.
    pub fn identity(n: usize) -> Weight {
        Weight {
            w: CMatrix::identity(n),
            sqrt: CMatrix::identity(n),
            inv_sqrt: CMatrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.w
    }

    pub fn sqrt(&self) -> &CMatrix {
        &self.sqrt
    }

    pub fn inv_sqrt(&self) -> &CMatrix {
        &self.inv_sqrt
    }

    pub fn dim(&self) -> usize {
        self.w.rows()
    }
}

/// Outcome of a successful weighted pseudoinverse computation: the inverse,
/// the two idempotents and the four defining-condition residuals (relative,
/// in order: `|ABA-A|`, `|BAB-B|`, hermiticity of `E AB`, hermiticity of
/// `F BA`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedPinvResult {
    pub b: CMatrix,
    pub p: CMatrix,
    pub q: CMatrix,
    pub residuals: [f64; 4],
    pub tol: f64,
}

/// Orthonormal basis of the range of an idempotent: left singular vectors
/// with singular value above the 0.5 gap.
fn projector_range_basis(p: &CMatrix) -> CMatrix {
    if p.is_zero() {
        return CMatrix::zeros(p.rows(), 0);
    }
    let parts = svd_parts(p);
    let cols: Vec<usize> = (0..parts.sigma.len())
        .filter(|&i| parts.sigma[i] > 0.5)
        .collect();
    CMatrix::from_fn(p.rows(), cols.len(), |i, j| parts.u.get(i, cols[j]))
}

fn rel_to(num: &CMatrix, scale: f64) -> f64 {
    if scale == 0.0 {
        spectral_norm(num)
    } else {
        spectral_norm(num) / scale
    }
}

fn herm_residual(m: &CMatrix) -> f64 {
    rel_to(&(&m.adjoint() - m), spectral_norm(m))
}

/// Weighted Moore-Penrose inverse via the square-root conjugation formula.
/// Errors with `VerificationFailure` when any defining condition exceeds
/// `tol` (the inverse as computed is then not trustworthy at that cutoff).
pub fn weighted_pinv(a: &CMatrix, e: &Weight, f: &Weight, tol: f64) -> Result<WeightedPinvResult> {
    if e.dim() != a.rows() || f.dim() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, weights are {} (left) and {} (right)",
            a.rows(),
            a.cols(),
            e.dim(),
            f.dim()
        )));
    }
    let c = &(e.sqrt() * a) * f.inv_sqrt();
    let b = &(f.inv_sqrt() * &svd_pinv(&c, tol)) * e.sqrt();
    let p = a * &b;
    let q = &b * a;

    let r1 = rel_to(&(&(&p * a) - a), spectral_norm(a));
    let r2 = rel_to(&(&(&b * &p) - &b), spectral_norm(&b));
    let r3 = herm_residual(&(e.matrix() * &p));
    let r4 = herm_residual(&(f.matrix() * &q));
    let residuals = [r1, r2, r3, r4];

    if residuals.iter().any(|&r| r > tol) {
        return Err(Error::VerificationFailure {
            residuals: residuals.to_vec(),
            tol,
        });
    }
    Ok(WeightedPinvResult {
        b,
        p,
        q,
        residuals,
        tol,
    })
}

/// The idempotent pair `P = A B`, `Q = B A` of the weighted inverse,
/// verified: both idempotent, `P` hermitian in the E-algebra, `Q` in the
/// F-algebra, `R(P) = R(A)` and `N(Q) = N(A)` by rank tests on stacked
/// systems.
pub fn projectors_of(
    a: &CMatrix,
    e: &Weight,
    f: &Weight,
    tol: f64,
) -> Result<(CMatrix, CMatrix)> {
    let r = weighted_pinv(a, e, f, tol)?;
    let (p, q) = (r.p, r.q);

    let idem_p = rel_to(&(&(&p * &p) - &p), spectral_norm(&p));
    let idem_q = rel_to(&(&(&q * &q) - &q), spectral_norm(&q));
    let mut violations = vec![];
    if idem_p > tol {
        violations.push(idem_p);
    }
    if idem_q > tol {
        violations.push(idem_q);
    }
    if !is_weighted_hermitian(&p, e, tol)? || !is_weighted_hermitian(&q, f, tol)? {
        violations.push(f64::INFINITY);
    }
    if !same_range(&p, a, tol).0 || !same_null(&q, a, tol).0 {
        violations.push(f64::INFINITY);
    }
    if !violations.is_empty() {
        return Err(Error::VerificationFailure {
            residuals: violations,
            tol,
        });
    }
    Ok((p, q))
}

/// Rebuilds the weighted inverse from the projector pair alone: zero on
/// `N(P)`, the inverse of the restriction `A: R(Q) -> R(A)` on the range.
/// By uniqueness this must reproduce [`weighted_pinv`] whenever `(P, Q)`
/// came from [`projectors_of`].
pub fn pinv_from_projectors(a: &CMatrix, p: &CMatrix, q: &CMatrix, tol: f64) -> Result<CMatrix> {
    if p.rows() != a.rows() || !p.is_square() || q.rows() != a.cols() || !q.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, projectors are {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    let idem_p = rel_to(&(&(p * p) - p), spectral_norm(p));
    let idem_q = rel_to(&(&(q * q) - q), spectral_norm(q));
    if idem_p > tol || idem_q > tol {
        return Err(Error::InconsistentProjectors(format!(
            "not idempotent within {tol:.1e}: residuals {idem_p:.3e}, {idem_q:.3e}"
        )));
    }
    if !same_range(p, a, tol).0 {
        return Err(Error::InconsistentProjectors(
            "range of P differs from range of A".into(),
        ));
    }
    if !same_null(q, a, tol).0 {
        return Err(Error::InconsistentProjectors(
            "null space of Q differs from null space of A".into(),
        ));
    }

    let r = rank(a, tol);
    // R(Q) and N(P) = R(I - P); idempotents have singular values >= 1 or
    // ~ 0, so an absolute threshold splits cleanly even when a factor is
    // numerically zero (P = I or P = 0).
    let w_q = projector_range_basis(q);
    let compl = &CMatrix::identity(p.rows()) - p;
    let z_p = projector_range_basis(&compl);
    if w_q.cols() != r || z_p.cols() != a.rows() - r {
        return Err(Error::InconsistentProjectors(format!(
            "projector ranks ({}, {}) incompatible with rank {} of A",
            w_q.cols(),
            p.rows() - z_p.cols(),
            r
        )));
    }

    let awq = a * &w_q;
    let m = CMatrix::hstack(&[&awq, &z_p]);
    let rhs = CMatrix::hstack(&[&w_q, &CMatrix::zeros(a.cols(), a.rows() - r)]);
    // S M = rhs  <=>  M^T S^T = rhs^T
    let s = m
        .transpose()
        .solve(&rhs.transpose())
        .ok_or_else(|| {
            Error::InconsistentProjectors(
                "restriction of A to R(Q) is numerically singular".into(),
            )
        })?
        .transpose();

    let gi1 = rel_to(&(&(&(a * &s) * a) - a), spectral_norm(a));
    let gi2 = rel_to(&(&(&(&s * a) * &s) - &s), spectral_norm(&s));
    if gi1 > tol || gi2 > tol {
        return Err(Error::InconsistentProjectors(format!(
            "constructed map is not a normalized generalized inverse: residuals {gi1:.3e}, {gi2:.3e}"
        )));
    }
    Ok(s)
}

/// Applies the inverse twice with the weights swapped and checks the result
/// returns to `A` within `tol` relative.
pub fn reverse_weights_identity_check(
    a: &CMatrix,
    e: &Weight,
    f: &Weight,
    tol: f64,
) -> Result<bool> {
    let b = weighted_pinv(a, e, f, tol)?.b;
    let back = weighted_pinv(&b, f, e, tol)?.b;
    Ok(rel_gap(&back, a) <= tol)
}

/// Group inverse outcome. `exists` iff `rank(A) = rank(A^2)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupInvResult {
    pub exists: bool,
    pub sharp: Option<CMatrix>,
    pub rank_a: usize,
    pub rank_a2: usize,
}

/// Group inverse via a full-rank factorization `A = C R` from the
/// rank-revealing SVD; the inverse is `C (R C)^-2 R`. All three defining
/// identities are verified at `tol`.
pub fn group_inverse(a: &CMatrix, tol: f64) -> Result<GroupInvResult> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "group inverse needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let rank_a = rank(a, tol);
    let rank_a2 = rank(&a.powu(2), tol);
    if rank_a != rank_a2 {
        return Ok(GroupInvResult {
            exists: false,
            sharp: None,
            rank_a,
            rank_a2,
        });
    }
    if rank_a == 0 {
        return Ok(GroupInvResult {
            exists: true,
            sharp: Some(CMatrix::zeros(n, n)),
            rank_a,
            rank_a2,
        });
    }

    let parts = svd_parts(a);
    let smax = parts.sigma.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = tol * smax;
    let kept: Vec<usize> = (0..parts.sigma.len())
        .filter(|&i| parts.sigma[i] > cutoff)
        .collect();
    let c = CMatrix::from_fn(n, kept.len(), |i, j| {
        parts.u.get(i, kept[j]) * parts.sigma[kept[j]]
    });
    let r = CMatrix::from_fn(kept.len(), n, |i, j| parts.v.get(j, kept[i]).conj());

    let rc = &r * &c;
    let rc_cond = cond2(&rc);
    let inv = match rc.try_inverse() {
        Some(inv) if rc_cond.is_finite() && rc_cond < 1.0 / tol => inv,
        _ => return Err(Error::SingularCore { cond: rc_cond }),
    };
    let sharp = &(&c * &(&inv * &inv)) * &r;

    let commute = commutator_gap(a, &sharp);
    let gi1 = rel_to(&(&(&(a * &sharp) * a) - a), spectral_norm(a));
    let gi2 = rel_to(
        &(&(&(&sharp * a) * &sharp) - &sharp),
        spectral_norm(&sharp),
    );
    if commute > tol || gi1 > tol || gi2 > tol {
        return Err(Error::VerificationFailure {
            residuals: vec![gi1, gi2, commute],
            tol,
        });
    }
    Ok(GroupInvResult {
        exists: true,
        sharp: Some(sharp),
        rank_a,
        rank_a2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    fn m2(e: [f64; 4]) -> CMatrix {
        CMatrix::from_real_rows(2, 2, &e)
    }

    #[test]
    fn weight_rejects_indefinite() {
        assert!(matches!(
            Weight::new(m2([1.0, 0.0, 0.0, -1.0])),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn weight_caches_square_roots() {
        let w = Weight::new(m2([2.0, 1.0, 1.0, 2.0])).unwrap();
        assert!(rel_gap(&(w.sqrt() * w.sqrt()), w.matrix()) < 1e-12);
        assert!(rel_gap(&(w.sqrt() * w.inv_sqrt()), &CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn unit_weights_reduce_to_moore_penrose() {
        let a = m2([1.0, 2.0, 3.0, 4.0]);
        let id = Weight::identity(2);
        let r = weighted_pinv(&a, &id, &id, DEFAULT_TOL).unwrap();
        assert!(rel_gap(&r.b, &svd_pinv(&a, DEFAULT_TOL)) < 1e-13);
    }

    #[test]
    fn shift_matrix_with_diagonal_weights() {
        let a = m2([0.0, 1.0, 0.0, 0.0]);
        let e = Weight::new(CMatrix::from_real_diagonal(&[1.0, 4.0])).unwrap();
        let f = Weight::new(CMatrix::from_real_diagonal(&[9.0, 1.0])).unwrap();
        let r = weighted_pinv(&a, &e, &f, DEFAULT_TOL).unwrap();
        assert!(r.b.max_abs_diff(&m2([0.0, 0.0, 1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn rank_one_projector_with_coupled_weight() {
        let a = m2([1.0, 0.0, 0.0, 0.0]);
        let e = Weight::new(m2([2.0, 1.0, 1.0, 1.0])).unwrap();
        let f = Weight::identity(2);
        let r = weighted_pinv(&a, &e, &f, DEFAULT_TOL).unwrap();
        assert!(r.b.max_abs_diff(&m2([1.0, 0.5, 0.0, 0.0])) < 1e-12);
        assert!(r.residuals.iter().all(|&x| x < 1e-12));
    }

    #[test]
    fn projectors_for_invertible_are_identity() {
        let a = m2([2.0, 1.0, 0.5, 3.0]);
        let e = Weight::new(m2([2.0, 1.0, 1.0, 2.0])).unwrap();
        let f = Weight::new(m2([3.0, 0.0, 0.0, 1.0])).unwrap();
        let (p, q) = projectors_of(&a, &e, &f, DEFAULT_TOL).unwrap();
        assert!(p.max_abs_diff(&CMatrix::identity(2)) < 1e-10);
        assert!(q.max_abs_diff(&CMatrix::identity(2)) < 1e-10);
    }

    #[test]
    fn projectors_of_derived_instance() {
        let a = m2([1.0, 0.0, 0.0, 0.0]);
        let e = Weight::new(m2([2.0, 1.0, 1.0, 1.0])).unwrap();
        let f = Weight::identity(2);
        let (p, q) = projectors_of(&a, &e, &f, DEFAULT_TOL).unwrap();
        assert!(p.max_abs_diff(&m2([1.0, 0.5, 0.0, 0.0])) < 1e-12);
        assert!(q.max_abs_diff(&m2([1.0, 0.0, 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn projectors_of_zero_are_zero() {
        let a = CMatrix::zeros(2, 2);
        let e = Weight::identity(2);
        let (p, q) = projectors_of(&a, &e, &e, DEFAULT_TOL).unwrap();
        assert!(p.is_zero());
        assert!(q.is_zero());
    }

    #[test]
    fn projector_route_inverts_invertible() {
        let a = m2([2.0, 1.0, 0.0, 3.0]);
        let id = CMatrix::identity(2);
        let s = pinv_from_projectors(&a, &id, &id, DEFAULT_TOL).unwrap();
        assert!(rel_gap(&s, &a.try_inverse().unwrap()) < 1e-12);
    }

    #[test]
    fn projector_route_on_diagonal() {
        let a = CMatrix::from_real_diagonal(&[3.0, 0.0]);
        let p = CMatrix::from_real_diagonal(&[1.0, 0.0]);
        let s = pinv_from_projectors(&a, &p, &p, DEFAULT_TOL).unwrap();
        assert!(s.max_abs_diff(&CMatrix::from_real_diagonal(&[1.0 / 3.0, 0.0])) < 1e-13);
    }

    #[test]
    fn projector_route_reproduces_formula_route() {
        let a = m2([1.0, 0.0, 0.0, 0.0]);
        let p = m2([1.0, 0.5, 0.0, 0.0]);
        let q = m2([1.0, 0.0, 0.0, 0.0]);
        let s = pinv_from_projectors(&a, &p, &q, DEFAULT_TOL).unwrap();
        assert!(s.max_abs_diff(&m2([1.0, 0.5, 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn projector_route_rejects_inconsistent_projectors() {
        let a = m2([1.0, 0.0, 0.0, 0.0]);
        // wrong range: projects onto the second coordinate
        let p = CMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert!(matches!(
            pinv_from_projectors(&a, &p, &p, DEFAULT_TOL),
            Err(Error::InconsistentProjectors(_))
        ));
        // not idempotent at all
        let bad = m2([0.5, 0.0, 0.0, 0.0]);
        assert!(matches!(
            pinv_from_projectors(&a, &bad, &bad, DEFAULT_TOL),
            Err(Error::InconsistentProjectors(_))
        ));
    }

    #[test]
    fn weight_swap_involution() {
        let e = Weight::new(m2([2.0, 1.0, 1.0, 1.0])).unwrap();
        let f = Weight::identity(2);
        for a in [
            m2([2.0, 1.0, 0.5, 3.0]),
            m2([1.0, 0.0, 0.0, 0.0]),
            CMatrix::zeros(2, 2),
        ] {
            assert!(reverse_weights_identity_check(&a, &e, &f, DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn group_inverse_of_idempotent_is_itself() {
        let a = m2([1.0, 1.0, 0.0, 0.0]);
        let g = group_inverse(&a, DEFAULT_TOL).unwrap();
        assert!(g.exists);
        assert!(g.sharp.unwrap().max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn nilpotent_has_no_group_inverse() {
        let a = m2([0.0, 1.0, 0.0, 0.0]);
        let g = group_inverse(&a, DEFAULT_TOL).unwrap();
        assert!(!g.exists);
        assert_eq!(g.rank_a, 1);
        assert_eq!(g.rank_a2, 0);
        assert!(g.sharp.is_none());
    }

    #[test]
    fn group_inverse_of_diagonal() {
        let a = CMatrix::from_real_diagonal(&[2.0, 0.0]);
        let g = group_inverse(&a, DEFAULT_TOL).unwrap();
        assert!(g
            .sharp
            .unwrap()
            .max_abs_diff(&CMatrix::from_real_diagonal(&[0.5, 0.0]))
            < 1e-13);
    }

    #[test]
    fn group_inverse_of_zero() {
        let g = group_inverse(&CMatrix::zeros(3, 3), DEFAULT_TOL).unwrap();
        assert!(g.exists);
        assert!(g.sharp.unwrap().is_zero());
    }
}
