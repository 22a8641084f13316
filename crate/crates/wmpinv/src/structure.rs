//! Structural compatibilities of the weighted inverse: the
//! left-multiplication lift, and restriction/quotient along an invariant
//! leading coordinate block.
//!
//! Invariant subspaces are modeled as leading coordinate blocks (every
//! finite-dimensional configuration is basis-equivalent to this form), so
//! restriction and quotient are literal submatrix extraction: the leading
//! k x k block is the restricted map, the trailing block the quotient map.
//! A hermitian positive definite weight leaves the leading block invariant
//! exactly when it is block-diagonal, which is what the checks enforce.

use crate::error::{Error, Result};
use crate::geninv::{weighted_pinv, Weight};
use crate::linalg::principal_sqrt_hpd;
use crate::matrix::CMatrix;
use crate::norms::{rel_gap, spectral_norm};
use serde::Serialize;

/// A square matrix with a designated leading invariant coordinate block of
/// size `k`. `invariance_residual` is the spectral norm of the lower-left
/// (n-k) x k block; it certifies invariance when small relative to the
/// whole matrix.
#[derive(Debug, Clone, Serialize)]
pub struct BlockModel {
    pub t: CMatrix,
    pub k: usize,
    pub invariance_residual: f64,
}

impl BlockModel {
    pub fn new(t: CMatrix, k: usize) -> Result<BlockModel> {
        if !t.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "block model needs a square matrix, got {}x{}",
                t.rows(),
                t.cols()
            )));
        }
        let n = t.rows();
        if k == 0 || k >= n {
            return Err(Error::DimensionMismatch(format!(
                "block size must satisfy 1 <= k < n, got k={k}, n={n}"
            )));
        }
        let lower_left = t.block(k, 0, n - k, k);
        Ok(BlockModel {
            t,
            k,
            invariance_residual: spectral_norm(&lower_left),
        })
    }

    pub fn dim(&self) -> usize {
        self.t.rows()
    }

    fn leading(&self) -> CMatrix {
        self.t.block(0, 0, self.k, self.k)
    }

    fn trailing(&self) -> CMatrix {
        let n = self.dim();
        self.t.block(self.k, self.k, n - self.k, n - self.k)
    }

    fn is_invariant(&self, tol: f64) -> bool {
        self.invariance_residual <= tol * spectral_norm(&self.t)
    }
}

/// The matrix of `X -> A X` under column-stacking vectorization: block
/// diagonal with n copies of A. For hermitian positive definite A the lift
/// is hermitian positive definite with the same spectrum (each eigenvalue
/// repeated n times).
#[derive(Debug, Clone)]
pub struct LiftedOperator {
    pub l: CMatrix,
    pub source: CMatrix,
}

pub fn left_mult_lift(a: &CMatrix) -> LiftedOperator {
    assert!(a.is_square(), "the lift acts on algebra elements");
    let n = a.rows();
    let copies: Vec<&CMatrix> = (0..n).map(|_| a).collect();
    LiftedOperator {
        l: CMatrix::block_diag(&copies),
        source: a.clone(),
    }
}

/// Column-stacking vectorization: an n x m matrix becomes an nm x 1 column.
pub fn vec_cols(x: &CMatrix) -> CMatrix {
    let (n, m) = (x.rows(), x.cols());
    CMatrix::from_fn(n * m, 1, |i, _| x.get(i % n, i / n))
}

/// Gap between the weighted inverse of the lifted operator (computed
/// honestly in the n^2-dimensional algebra with lifted weights) and the
/// lift of the weighted inverse.
pub fn lift_gap(a: &CMatrix, e: &Weight, f: &Weight, tol: f64) -> Result<f64> {
    let small = weighted_pinv(a, e, f, tol)?.b;
    let lift_a = left_mult_lift(a).l;
    let lift_e = Weight::new(left_mult_lift(e.matrix()).l)?;
    let lift_f = Weight::new(left_mult_lift(f.matrix()).l)?;
    let big = weighted_pinv(&lift_a, &lift_e, &lift_f, tol)?.b;
    Ok(rel_gap(&big, &left_mult_lift(&small).l))
}

/// Checks that the weighted inverse of the lifted operator equals the lift
/// of the weighted inverse.
pub fn verify_lift_theorem(a: &CMatrix, e: &Weight, f: &Weight, tol: f64) -> Result<bool> {
    Ok(lift_gap(a, e, f, tol)? <= tol)
}

/// Splits an invariant block model into its restriction (leading block) and
/// quotient (trailing block) pieces.
pub fn restriction_blocks(m: &BlockModel, tol: f64) -> Result<(CMatrix, CMatrix)> {
    if !m.is_invariant(tol) {
        return Err(Error::NotInvariant {
            residual: m.invariance_residual,
            tol: tol * spectral_norm(&m.t),
        });
    }
    Ok((m.leading(), m.trailing()))
}

fn block_diag_weight_parts(w: &BlockModel, tol: f64) -> Result<(Weight, Weight, Weight)> {
    let n = w.dim();
    let k = w.k;
    let scale = spectral_norm(&w.t);
    let off = spectral_norm(&w.t.block(k, 0, n - k, k))
        .max(spectral_norm(&w.t.block(0, k, k, n - k)));
    if off > tol * scale {
        return Err(Error::NotInvariant {
            residual: off,
            tol: tol * scale,
        });
    }
    let full = Weight::new(w.t.clone())?;
    let leading = Weight::new(w.leading())?;
    let trailing = Weight::new(w.trailing())?;
    Ok((full, leading, trailing))
}

fn checked_inverse_blocks(
    t: &BlockModel,
    e: &BlockModel,
    f: &BlockModel,
    tol: f64,
) -> Result<(CMatrix, Weight, Weight, Weight, Weight, Weight, Weight)> {
    let n = t.dim();
    let k = t.k;
    if e.dim() != n || f.dim() != n || e.k != k || f.k != k {
        return Err(Error::DimensionMismatch(
            "matrix and weights must share dimension and block size".into(),
        ));
    }
    if !t.is_invariant(tol) {
        return Err(Error::NotInvariant {
            residual: t.invariance_residual,
            tol: tol * spectral_norm(&t.t),
        });
    }
    let (ew, e11, e22) = block_diag_weight_parts(e, tol)?;
    let (fw, f11, f22) = block_diag_weight_parts(f, tol)?;

    let b = weighted_pinv(&t.t, &ew, &fw, tol)?.b;
    let b_lower_left = spectral_norm(&b.block(k, 0, n - k, k));
    let b_scale = spectral_norm(&b);
    if b_lower_left > tol * b_scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotInvariant {
            residual: b_lower_left,
            tol: tol * b_scale,
        });
    }
    Ok((b, ew, fw, e11, e22, f11, f22))
}

/// Restriction compatibility: the weighted inverse of the leading block
/// equals the leading block of the weighted inverse, and the weight square
/// roots commute with block extraction. The invariance hypotheses (leading
/// block invariant for the matrix and its inverse, weights block-diagonal)
/// are checked and reported as `NotInvariant` when unmet.
pub fn verify_restriction_theorem(
    t: &BlockModel,
    e: &BlockModel,
    f: &BlockModel,
    tol: f64,
) -> Result<bool> {
    let (inverse_gap, sqrt_gap) = restriction_gaps(t, e, f, tol)?;
    Ok(inverse_gap <= tol && sqrt_gap <= tol)
}

/// Gaps behind [`verify_restriction_theorem`]: the inverse-block gap and
/// the worse of the two square-root block-extraction gaps.
pub fn restriction_gaps(
    t: &BlockModel,
    e: &BlockModel,
    f: &BlockModel,
    tol: f64,
) -> Result<(f64, f64)> {
    let k = t.k;
    let (b, _ew, _fw, e11, _e22, f11, _f22) = checked_inverse_blocks(t, e, f, tol)?;
    let t11 = t.leading();
    let small = weighted_pinv(&t11, &e11, &f11, tol)?.b;
    let inverse_gap = rel_gap(&small, &b.block(0, 0, k, k));

    let mut sqrt_gap = 0.0f64;
    for w in [e, f] {
        let full_sqrt = principal_sqrt_hpd(&w.t, tol)?;
        let lead_sqrt = principal_sqrt_hpd(&w.leading(), tol)?;
        sqrt_gap = sqrt_gap.max(rel_gap(&lead_sqrt, &full_sqrt.block(0, 0, k, k)));
    }
    Ok((inverse_gap, sqrt_gap))
}

/// Quotient compatibility: the weighted inverse of the trailing block
/// equals the trailing block of the weighted inverse (the quotient map in
/// the adapted coordinates), with the square-root compatibility on the
/// trailing blocks.
pub fn verify_quotient_theorem(
    t: &BlockModel,
    e: &BlockModel,
    f: &BlockModel,
    tol: f64,
) -> Result<bool> {
    let (inverse_gap, sqrt_gap) = quotient_gaps(t, e, f, tol)?;
    Ok(inverse_gap <= tol && sqrt_gap <= tol)
}

/// Gaps behind [`verify_quotient_theorem`].
pub fn quotient_gaps(
    t: &BlockModel,
    e: &BlockModel,
    f: &BlockModel,
    tol: f64,
) -> Result<(f64, f64)> {
    let n = t.dim();
    let k = t.k;
    let (b, _ew, _fw, _e11, e22, _f11, f22) = checked_inverse_blocks(t, e, f, tol)?;
    let t22 = t.trailing();
    let small = weighted_pinv(&t22, &e22, &f22, tol)?.b;
    let inverse_gap = rel_gap(&small, &b.block(k, k, n - k, n - k));

    let mut sqrt_gap = 0.0f64;
    for w in [e, f] {
        let full_sqrt = principal_sqrt_hpd(&w.t, tol)?;
        let trail_sqrt = principal_sqrt_hpd(&w.trailing(), tol)?;
        sqrt_gap = sqrt_gap.max(rel_gap(&trail_sqrt, &full_sqrt.block(k, k, n - k, n - k)));
    }
    Ok((inverse_gap, sqrt_gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig;
    use crate::DEFAULT_TOL;

    fn m2(e: [f64; 4]) -> CMatrix {
        CMatrix::from_real_rows(2, 2, &e)
    }

    #[test]
    fn lift_of_identity() {
        assert_eq!(left_mult_lift(&CMatrix::identity(2)).l, CMatrix::identity(4));
    }

    #[test]
    fn lift_is_block_diagonal_copies() {
        let a = m2([1.0, 2.0, 3.0, 4.0]);
        let l = left_mult_lift(&a).l;
        assert_eq!(l, CMatrix::block_diag(&[&a, &a]));
    }

    #[test]
    fn lift_reproduces_left_multiplication_on_a_probe_basis() {
        let a = m2([1.0, -2.0, 0.5, 3.0]);
        let l = left_mult_lift(&a).l;
        for i in 0..2 {
            for j in 0..2 {
                let mut x = CMatrix::zeros(2, 2);
                x.set(i, j, num_complex::Complex64::ONE);
                let lhs = &l * &vec_cols(&x);
                let rhs = vec_cols(&(&a * &x));
                assert!(lhs.max_abs_diff(&rhs) < 1e-14);
            }
        }
    }

    #[test]
    fn lift_of_hpd_has_replicated_spectrum() {
        let a = m2([2.0, 1.0, 1.0, 2.0]);
        let l = left_mult_lift(&a).l;
        let mut small: Vec<f64> = eig(&a).unwrap().eigenvalues.iter().map(|z| z.re).collect();
        let mut big: Vec<f64> = eig(&l).unwrap().eigenvalues.iter().map(|z| z.re).collect();
        small.sort_by(f64::total_cmp);
        big.sort_by(f64::total_cmp);
        for (i, &b) in big.iter().enumerate() {
            assert!((b - small[i / 2]).abs() < 1e-10);
        }
    }

    #[test]
    fn lift_theorem_on_invertible_and_zero() {
        let e = Weight::new(m2([2.0, 1.0, 1.0, 2.0])).unwrap();
        let f = Weight::new(m2([3.0, 0.0, 0.0, 1.0])).unwrap();
        assert!(verify_lift_theorem(&m2([2.0, 1.0, 0.5, 3.0]), &e, &f, DEFAULT_TOL).unwrap());
        assert!(verify_lift_theorem(&CMatrix::zeros(2, 2), &e, &f, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn lift_theorem_on_derived_instance() {
        let a = m2([1.0, 0.0, 0.0, 0.0]);
        let e = Weight::new(m2([2.0, 1.0, 1.0, 1.0])).unwrap();
        let f = Weight::identity(2);
        assert!(verify_lift_theorem(&a, &e, &f, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn restriction_blocks_of_triangular() {
        let t = BlockModel::new(m2([1.0, 5.0, 0.0, 2.0]), 1).unwrap();
        let (t11, t22) = restriction_blocks(&t, DEFAULT_TOL).unwrap();
        assert_eq!(t11.get(0, 0).re, 1.0);
        assert_eq!(t22.get(0, 0).re, 2.0);
    }

    #[test]
    fn restriction_blocks_reject_coupling_from_below() {
        let t = BlockModel::new(m2([1.0, 0.0, 3.0, 2.0]), 1).unwrap();
        assert!(matches!(
            restriction_blocks(&t, DEFAULT_TOL),
            Err(Error::NotInvariant { .. })
        ));
    }

    fn block_diag4(a: &CMatrix, b: &CMatrix) -> CMatrix {
        CMatrix::block_diag(&[a, b])
    }

    #[test]
    fn restriction_theorem_on_block_diagonal_instance() {
        let t = block_diag4(&m2([1.0, 0.0, 0.0, 0.0]), &m2([2.0, 0.0, 0.0, 3.0]));
        let e = block_diag4(&m2([2.0, 1.0, 1.0, 1.0]), &CMatrix::identity(2));
        let f = CMatrix::identity(4);
        let tm = BlockModel::new(t.clone(), 2).unwrap();
        let em = BlockModel::new(e.clone(), 2).unwrap();
        let fm = BlockModel::new(f.clone(), 2).unwrap();
        assert!(verify_restriction_theorem(&tm, &em, &fm, DEFAULT_TOL).unwrap());
        assert!(verify_quotient_theorem(&tm, &em, &fm, DEFAULT_TOL).unwrap());

        // the leading block reproduces the known 2x2 weighted inverse
        let ew = Weight::new(e).unwrap();
        let fw = Weight::new(f).unwrap();
        let b = weighted_pinv(&t, &ew, &fw, DEFAULT_TOL).unwrap().b;
        assert!(b.block(0, 0, 2, 2).max_abs_diff(&m2([1.0, 0.5, 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn quotient_theorem_on_coupled_singular_instance() {
        // leading coordinate invariant for both the matrix and its inverse
        let t = CMatrix::from_real_rows(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let tm = BlockModel::new(t, 1).unwrap();
        let id = BlockModel::new(CMatrix::identity(3), 1).unwrap();
        assert!(verify_quotient_theorem(&tm, &id, &id, DEFAULT_TOL).unwrap());
        assert!(verify_restriction_theorem(&tm, &id, &id, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn coupled_invertible_triangular_instance() {
        let t = CMatrix::from_real_rows(3, 3, &[1.0, 2.0, -1.0, 0.0, 3.0, 0.5, 0.0, 0.0, 2.0]);
        let tm = BlockModel::new(t, 1).unwrap();
        let e = BlockModel::new(
            CMatrix::block_diag(&[&CMatrix::identity(1), &m2([2.0, 1.0, 1.0, 2.0])]),
            1,
        )
        .unwrap();
        let f = BlockModel::new(CMatrix::from_real_diagonal(&[2.0, 1.0, 3.0]), 1).unwrap();
        assert!(verify_restriction_theorem(&tm, &e, &f, DEFAULT_TOL).unwrap());
        assert!(verify_quotient_theorem(&tm, &e, &f, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn hypothesis_failure_is_reported_not_judged() {
        // the inverse of this coupled singular matrix does not leave the
        // leading coordinate invariant
        let t = BlockModel::new(m2([0.0, 1.0, 0.0, 0.0]), 1).unwrap();
        let id = BlockModel::new(CMatrix::identity(2), 1).unwrap();
        assert!(matches!(
            verify_restriction_theorem(&t, &id, &id, DEFAULT_TOL),
            Err(Error::NotInvariant { .. })
        ));
    }

    #[test]
    fn non_block_diagonal_weight_is_rejected() {
        let t = BlockModel::new(m2([1.0, 0.0, 0.0, 2.0]), 1).unwrap();
        let coupled = BlockModel::new(m2([2.0, 1.0, 1.0, 2.0]), 1).unwrap();
        let id = BlockModel::new(CMatrix::identity(2), 1).unwrap();
        assert!(matches!(
            verify_restriction_theorem(&t, &coupled, &id, DEFAULT_TOL),
            Err(Error::NotInvariant { .. })
        ));
    }

    #[test]
    fn zero_matrix_restriction_and_quotient() {
        let t = BlockModel::new(CMatrix::zeros(3, 3), 1).unwrap();
        let id = BlockModel::new(CMatrix::identity(3), 1).unwrap();
        assert!(verify_restriction_theorem(&t, &id, &id, DEFAULT_TOL).unwrap());
        assert!(verify_quotient_theorem(&t, &id, &id, DEFAULT_TOL).unwrap());
    }
}
