//! Operator norms induced by vector p-norms, plus the Frobenius norm.

use crate::matrix::CMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which norm the algebra carries. `Frobenius` is auxiliary only: it is not
/// a unital algebra norm, so hermiticity verdicts never use it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    /// Induced by the vector 1-norm: max column abs-sum.
    One,
    /// Induced by the vector 2-norm: largest singular value.
    Two,
    /// Induced by the vector inf-norm: max row abs-sum.
    Inf,
    /// Entrywise 2-norm.
    Frobenius,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::One => write!(f, "1"),
            NormKind::Two => write!(f, "2"),
            NormKind::Inf => write!(f, "inf"),
            NormKind::Frobenius => write!(f, "fro"),
        }
    }
}

impl FromStr for NormKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1" => Ok(NormKind::One),
            "2" => Ok(NormKind::Two),
            "inf" => Ok(NormKind::Inf),
            "fro" | "frobenius" => Ok(NormKind::Frobenius),
            other => Err(format!("unknown norm {other:?}; expected 1, 2, inf or fro")),
        }
    }
}

/// Operator norm of `m` for the given kind. Exact closed forms for 1/inf,
/// largest singular value for 2.
pub fn induced_norm(m: &CMatrix, kind: NormKind) -> f64 {
    match kind {
        NormKind::One => {
            let mut best = 0.0f64;
            for j in 0..m.cols() {
                let s: f64 = (0..m.rows()).map(|i| m.get(i, j).norm()).sum();
                best = best.max(s);
            }
            best
        }
        NormKind::Inf => {
            let mut best = 0.0f64;
            for i in 0..m.rows() {
                let s: f64 = (0..m.cols()).map(|j| m.get(i, j).norm()).sum();
                best = best.max(s);
            }
            best
        }
        NormKind::Two => spectral_norm(m),
        NormKind::Frobenius => m.frobenius_norm(),
    }
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    crate::linalg::singular_values(m)
        .first()
        .copied()
        .unwrap_or(0.0)
}

/// Relative gap `|x - y| / max(|x|, |y|)` in the spectral norm, 0 when both
/// operands vanish. The workhorse for every residual check in the crate.
pub fn rel_gap(x: &CMatrix, y: &CMatrix) -> f64 {
    let scale = spectral_norm(x).max(spectral_norm(y));
    if scale == 0.0 {
        return 0.0;
    }
    spectral_norm(&(x - y)) / scale
}

/// `|xy - yx| / (|x| |y|)`, 0 when either factor vanishes.
pub fn commutator_gap(x: &CMatrix, y: &CMatrix) -> f64 {
    let scale = spectral_norm(x) * spectral_norm(y);
    if scale == 0.0 {
        return 0.0;
    }
    spectral_norm(&(&(x * y) - &(y * x))) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_has_unit_norms() {
        let i2 = CMatrix::identity(2);
        assert_eq!(induced_norm(&i2, NormKind::One), 1.0);
        assert_eq!(induced_norm(&i2, NormKind::Inf), 1.0);
        assert!((induced_norm(&i2, NormKind::Two) - 1.0).abs() < 1e-14);
        assert!((induced_norm(&i2, NormKind::Frobenius) - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn one_norm_is_max_column_sum() {
        let a = CMatrix::from_real_rows(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(induced_norm(&a, NormKind::One), 6.0);
        assert_eq!(induced_norm(&a, NormKind::Inf), 7.0);
    }

    #[test]
    fn nilpotent_spectral_norm_is_one() {
        let a = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!((induced_norm(&a, NormKind::Two) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_iff_norm_zero() {
        let z = CMatrix::zeros(3, 3);
        for kind in [NormKind::One, NormKind::Two, NormKind::Inf, NormKind::Frobenius] {
            assert_eq!(induced_norm(&z, kind), 0.0);
        }
        let mut a = CMatrix::zeros(3, 3);
        a.set(2, 1, Complex64::new(0.0, 1e-30));
        for kind in [NormKind::One, NormKind::Two, NormKind::Inf, NormKind::Frobenius] {
            assert!(induced_norm(&a, kind) > 0.0);
        }
    }
}
