//! Hermiticity and positivity of a matrix viewed as an element of the
//! Banach algebra (M_n, |.|) for a chosen operator norm.
//!
//! The defining property quantifies `|exp(itA)| = 1` over all real t; here
//! it is tested on a finite symmetric grid. For the spectral norm the exact
//! criterion (self-adjointness) is available and cross-checked against the
//! grid; for the 1- and inf-norms no exact criterion is implemented, so
//! verdicts are labeled grid-supported.

use crate::error::{Error, Result};
use crate::geninv::Weight;
use crate::linalg::{eig, exp_with_plan, hermitian_eigen, plan_exp};
use crate::matrix::CMatrix;
use crate::norms::{induced_norm, spectral_norm, NormKind};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Default half-width of the t-grid.
pub const DEFAULT_T_MAX: f64 = 8.0;
/// Default number of grid points (odd, so 0 is always a node).
pub const DEFAULT_STEPS: usize = 129;

/// How a hermiticity verdict is backed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certification {
    /// Grid test agreed with the exact spectral-norm criterion.
    ExactCrossChecked,
    /// Grid evidence only (induced 1/inf norms have no exact criterion here).
    GridSupported,
}

/// Outcome of the exponential grid test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermitianReport {
    pub verdict: bool,
    /// max over the grid of | |exp(itA)| - 1 |.
    pub max_deviation: f64,
    pub grid: Vec<f64>,
    pub norm_kind: NormKind,
    pub tol: f64,
    pub certification: Certification,
}

/// Samples of the numerical range x* A x over unit vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldOfValuesSample {
    pub samples: Vec<Complex64>,
    /// Largest |imaginary part| over the samples.
    pub max_imag: f64,
    /// Smallest real part over the samples.
    pub min_real: f64,
}

/// Symmetric grid containing 0. An even step count is bumped to the next
/// odd one so the invariant holds for any input.
fn symmetric_grid(t_max: f64, steps: usize) -> Vec<f64> {
    let m = if steps % 2 == 0 { steps + 1 } else { steps };
    let half = (m / 2) as isize;
    let h = t_max / half as f64;
    (-half..=half).map(|i| i as f64 * h).collect()
}

/// Evaluates `|exp(itA)|` on a uniform grid over `[-t_max, t_max]`; the
/// verdict is true iff every value stays within `tol` of 1. For the
/// spectral norm the exact self-adjointness criterion is cross-checked and
/// disagreement is an error.
pub fn is_banach_hermitian(
    a: &CMatrix,
    kind: NormKind,
    t_max: f64,
    steps: usize,
    tol: f64,
) -> Result<HermitianReport> {
    if kind == NormKind::Frobenius {
        return Err(Error::UnsupportedNorm(
            "the Frobenius norm is not a unital algebra norm; hermiticity verdicts use induced norms only".into(),
        ));
    }
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "hermiticity needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if steps < 8 {
        return Err(Error::PreconditionUnmet(format!(
            "grid needs at least 8 steps, got {steps}"
        )));
    }
    if !(t_max > 0.0) {
        return Err(Error::PreconditionUnmet(format!(
            "t_max must be positive, got {t_max}"
        )));
    }

    let grid = symmetric_grid(t_max, steps);
    let plan = plan_exp(a);
    let mut max_deviation = 0.0f64;
    for &t in &grid {
        let e = exp_with_plan(a, &plan, Complex64::new(0.0, t));
        let dev = (induced_norm(&e, kind) - 1.0).abs();
        max_deviation = max_deviation.max(dev);
    }
    let verdict = max_deviation <= tol;

    let certification = if kind == NormKind::Two {
        let scale = spectral_norm(a);
        let dev = if scale == 0.0 {
            0.0
        } else {
            spectral_norm(&(a - &a.adjoint())) / scale
        };
        let exact = dev <= tol;
        if exact != verdict {
            return Err(Error::CriterionMismatch {
                grid: verdict,
                exact,
                max_deviation,
            });
        }
        Certification::ExactCrossChecked
    } else {
        Certification::GridSupported
    };

    Ok(HermitianReport {
        verdict,
        max_deviation,
        grid,
        norm_kind: kind,
        tol,
        certification,
    })
}

/// Positive element check: hermitian (grid test with default parameters)
/// with spectrum on the nonnegative real axis within `tol * |A|`.
pub fn is_positive(a: &CMatrix, kind: NormKind, tol: f64) -> Result<bool> {
    let report = is_banach_hermitian(a, kind, DEFAULT_T_MAX, DEFAULT_STEPS, tol)?;
    if !report.verdict {
        return Ok(false);
    }
    let scale = induced_norm(a, kind);
    let sd = eig(a)?;
    Ok(sd
        .eigenvalues
        .iter()
        .all(|l| l.re >= -tol * scale && l.im.abs() <= tol * scale))
}

/// Norm of `x` in the W-similarity algebra: `|W^(1/2) x W^(-1/2)|`.
pub fn weighted_norm(x: &CMatrix, w: &Weight, kind: NormKind) -> Result<f64> {
    if w.dim() != x.rows() || !x.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "weighted norm needs matching square shapes, got {}x{} with weight {}",
            x.rows(),
            x.cols(),
            w.dim()
        )));
    }
    Ok(induced_norm(&(&(w.sqrt() * x) * w.inv_sqrt()), kind))
}

/// Hermiticity of `x` in the W-weighted algebra, decided by the
/// spectral-norm shortcut: `W x` self-adjoint (equivalently,
/// `W^(1/2) x W^(-1/2)` self-adjoint).
pub fn is_weighted_hermitian(x: &CMatrix, w: &Weight, tol: f64) -> Result<bool> {
    if w.dim() != x.rows() || !x.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "weighted hermiticity needs matching square shapes, got {}x{} with weight {}",
            x.rows(),
            x.cols(),
            w.dim()
        )));
    }
    let wx = w.matrix() * x;
    let scale = spectral_norm(&wx);
    let dev = spectral_norm(&(&wx.adjoint() - &wx));
    Ok(dev <= tol * scale)
}

/// Samples `x* A x` over `n_samples` Gaussian-normalized unit vectors plus
/// the eigenvectors of the hermitian part. Deterministic given the seed.
pub fn field_of_values_sample(a: &CMatrix, n_samples: usize, seed: u64) -> Result<FieldOfValuesSample> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "field of values needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if n_samples == 0 {
        return Err(Error::PreconditionUnmet("need at least one sample".into()));
    }
    let n = a.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n_samples + n);
    for _ in 0..n_samples {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
        vectors.push(v);
    }
    let he = hermitian_eigen(a)?;
    for j in 0..n {
        vectors.push((0..n).map(|i| he.eigenvectors.get(i, j)).collect());
    }

    let mut samples = Vec::with_capacity(vectors.len());
    for v in &vectors {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
        let mut s = Complex64::ZERO;
        for i in 0..n {
            let mut row = Complex64::ZERO;
            for j in 0..n {
                row += a.get(i, j) * x[j];
            }
            s += x[i].conj() * row;
        }
        samples.push(s);
    }
    let max_imag = samples.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let min_real = samples.iter().fold(f64::INFINITY, |m, z| m.min(z.re));
    Ok(FieldOfValuesSample {
        samples,
        max_imag,
        min_real,
    })
}

/// Standard complex Gaussian via Box-Muller (kept explicit so corpora are
/// reproducible from the seed alone).
pub(crate) fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let mut pair = || {
        let u1: f64 = loop {
            let u = rng.gen::<f64>();
            if u > 0.0 {
                break u;
            }
        };
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        (r * (2.0 * std::f64::consts::PI * u2).cos(), r * (2.0 * std::f64::consts::PI * u2).sin())
    };
    let (re, _) = pair();
    let (im, _) = pair();
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    #[test]
    fn grid_is_symmetric_and_contains_zero() {
        for steps in [8, 9, 128, 129] {
            let g = symmetric_grid(3.0, steps);
            assert!(g.len() % 2 == 1);
            assert!(g.contains(&0.0));
            let mid = g.len() / 2;
            for i in 0..=mid {
                assert_eq!(g[mid - i], -g[mid + i]);
            }
            assert_eq!(*g.last().unwrap(), 3.0);
        }
    }

    #[test]
    fn self_adjoint_passes_spectral_grid() {
        let a = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let r = is_banach_hermitian(&a, NormKind::Two, DEFAULT_T_MAX, DEFAULT_STEPS, DEFAULT_TOL)
            .unwrap();
        assert!(r.verdict);
        assert!(r.max_deviation <= 1e-12);
        assert_eq!(r.certification, Certification::ExactCrossChecked);
    }

    #[test]
    fn jordan_block_is_refuted_with_golden_ratio_deviation() {
        let a = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let r = is_banach_hermitian(&a, NormKind::Two, 1.0, DEFAULT_STEPS, DEFAULT_TOL).unwrap();
        assert!(!r.verdict);
        let expected = (1.0 + 5f64.sqrt()) / 2.0 - 1.0;
        assert!((r.max_deviation - expected).abs() < 1e-9);
    }

    #[test]
    fn real_diagonal_passes_one_norm_grid() {
        let a = CMatrix::from_real_diagonal(&[1.5, -0.5, 2.0]);
        let r = is_banach_hermitian(&a, NormKind::One, DEFAULT_T_MAX, DEFAULT_STEPS, DEFAULT_TOL)
            .unwrap();
        assert!(r.verdict);
        assert_eq!(r.certification, Certification::GridSupported);
    }

    #[test]
    fn frobenius_is_rejected_for_verdicts() {
        let a = CMatrix::identity(2);
        assert!(matches!(
            is_banach_hermitian(&a, NormKind::Frobenius, 1.0, 9, DEFAULT_TOL),
            Err(Error::UnsupportedNorm(_))
        ));
    }

    #[test]
    fn grid_preconditions_are_enforced() {
        let a = CMatrix::identity(2);
        assert!(matches!(
            is_banach_hermitian(&a, NormKind::Two, 1.0, 7, DEFAULT_TOL),
            Err(Error::PreconditionUnmet(_))
        ));
        assert!(matches!(
            is_banach_hermitian(&a, NormKind::Two, 0.0, 9, DEFAULT_TOL),
            Err(Error::PreconditionUnmet(_))
        ));
    }

    #[test]
    fn positivity_examples() {
        let tol = DEFAULT_TOL;
        assert!(is_positive(&CMatrix::from_real_diagonal(&[1.0, 2.0]), NormKind::Two, tol).unwrap());
        assert!(is_positive(&CMatrix::from_real_diagonal(&[1.0, 2.0]), NormKind::One, tol).unwrap());
        assert!(!is_positive(&CMatrix::from_real_diagonal(&[1.0, -1.0]), NormKind::Two, tol).unwrap());
        // eigenvalues 1 and 3
        let a = CMatrix::from_real_rows(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert!(is_positive(&a, NormKind::Two, tol).unwrap());
    }

    #[test]
    fn weighted_norm_examples() {
        let x = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let id = Weight::identity(2);
        assert!((weighted_norm(&x, &id, NormKind::Two).unwrap() - 1.0).abs() < 1e-13);
        let w = Weight::new(CMatrix::from_real_diagonal(&[1.0, 4.0])).unwrap();
        assert!((weighted_norm(&x, &w, NormKind::Two).unwrap() - 0.5).abs() < 1e-12);
        assert!((weighted_norm(&CMatrix::identity(2), &w, NormKind::Two).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_hermiticity_examples() {
        let tol = DEFAULT_TOL;
        let x = CMatrix::from_real_rows(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let id = Weight::identity(2);
        assert!(!is_weighted_hermitian(&x, &id, tol).unwrap());
        let w = Weight::new(CMatrix::from_real_rows(2, 2, &[1.0, 1.0, 1.0, 2.0])).unwrap();
        assert!(is_weighted_hermitian(&x, &w, tol).unwrap());
        let sa = CMatrix::from_real_rows(2, 2, &[1.0, 2.0, 2.0, -1.0]);
        assert!(is_weighted_hermitian(&sa, &id, tol).unwrap());
    }

    #[test]
    fn field_of_values_self_adjoint_is_real() {
        let a = CMatrix::from_real_rows(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let s = field_of_values_sample(&a, 200, 7).unwrap();
        assert!(s.max_imag <= 1e-12);
        assert!(s.min_real >= 1.0 - 1e-12);
    }

    #[test]
    fn field_of_values_of_i_times_identity() {
        let a = CMatrix::from_diagonal(&[Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0)]);
        let s = field_of_values_sample(&a, 50, 3).unwrap();
        for z in &s.samples {
            assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn field_of_values_of_jordan_block_stays_in_half_disk() {
        let a = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let s = field_of_values_sample(&a, 500, 11).unwrap();
        for z in &s.samples {
            assert!(z.norm() <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn field_of_values_is_deterministic() {
        let a = CMatrix::from_real_rows(2, 2, &[1.0, 3.0, 0.0, -1.0]);
        let s1 = field_of_values_sample(&a, 64, 42).unwrap();
        let s2 = field_of_values_sample(&a, 64, 42).unwrap();
        assert_eq!(s1.samples, s2.samples);
    }

    #[test]
    fn verdict_invariant_under_real_shifts() {
        let a = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let shifted = &a + &CMatrix::identity(2).scale(3.5);
        let r1 = is_banach_hermitian(&a, NormKind::Two, 4.0, 65, DEFAULT_TOL).unwrap();
        let r2 = is_banach_hermitian(&shifted, NormKind::Two, 4.0, 65, DEFAULT_TOL).unwrap();
        assert_eq!(r1.verdict, r2.verdict);
    }
}
