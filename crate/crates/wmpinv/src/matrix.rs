//! Dense complex matrices.
//!
//! `CMatrix` is the value type everything else operates on: a dense
//! row-major complex matrix of double-precision pairs. Internally it wraps
//! `nalgebra::DMatrix` so factorizations can be delegated; the wrapper keeps
//! the public surface (and the serialized form) independent of the backend's
//! storage order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    m: DMatrix<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            m: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix {
            m: DMatrix::identity(n, n),
        }
    }

    /// Builds from row-major entries. Panics if `entries.len() != rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count {} does not match {}x{}",
            entries.len(),
            rows,
            cols
        );
        CMatrix {
            m: DMatrix::from_row_slice(rows, cols, &entries),
        }
    }

    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Self {
        Self::from_rows(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        CMatrix {
            m: DMatrix::from_fn(rows, cols, f),
        }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { Complex64::ZERO })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    pub(crate) fn from_dmatrix(m: DMatrix<Complex64>) -> Self {
        CMatrix { m }
    }

    pub(crate) fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn rows(&self) -> usize {
        self.m.nrows()
    }

    pub fn cols(&self) -> usize {
        self.m.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.m[(i, j)] = v;
    }

    pub fn entries_row_major(&self) -> Vec<Complex64> {
        let (r, c) = (self.rows(), self.cols());
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub fn all_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        CMatrix {
            m: self.m.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        CMatrix {
            m: self.m.transpose(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        CMatrix {
            m: self.m.map(f),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// (A + A*) / 2. Exactly hermitian by construction.
    pub fn hermitian_part(&self) -> Self {
        (&(self + &self.adjoint())).scale(0.5)
    }

    /// A^k for k >= 0 (A^0 = I). Requires square.
    pub fn powu(&self, k: u32) -> Self {
        assert!(self.is_square(), "powu requires a square matrix");
        let mut acc = CMatrix::identity(self.rows());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn block(&self, i0: usize, j0: usize, nrows: usize, ncols: usize) -> Self {
        CMatrix {
            m: self.m.view((i0, j0), (nrows, ncols)).into_owned(),
        }
    }

    pub fn set_block(&mut self, i0: usize, j0: usize, block: &CMatrix) {
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                self.m[(i0 + i, j0 + j)] = block.get(i, j);
            }
        }
    }

    /// Horizontal concatenation. All blocks must share the row count.
    pub fn hstack(blocks: &[&CMatrix]) -> Self {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows();
        let cols: usize = blocks.iter().map(|b| b.cols()).sum();
        let mut out = CMatrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows(), rows, "hstack row mismatch");
            out.set_block(0, off, b);
            off += b.cols();
        }
        out
    }

    /// Vertical concatenation. All blocks must share the column count.
    pub fn vstack(blocks: &[&CMatrix]) -> Self {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols();
        let rows: usize = blocks.iter().map(|b| b.rows()).sum();
        let mut out = CMatrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols(), cols, "vstack column mismatch");
            out.set_block(off, 0, b);
            off += b.rows();
        }
        out
    }

    pub fn block_diag(blocks: &[&CMatrix]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows()).sum();
        let cols: usize = blocks.iter().map(|b| b.cols()).sum();
        let mut out = CMatrix::zeros(rows, cols);
        let (mut i0, mut j0) = (0, 0);
        for b in blocks {
            out.set_block(i0, j0, b);
            i0 += b.rows();
            j0 += b.cols();
        }
        out
    }

    /// Inverse via LU; `None` when numerically singular.
    pub fn try_inverse(&self) -> Option<Self> {
        self.m.clone().try_inverse().map(CMatrix::from_dmatrix)
    }

    /// Solves `self * X = rhs` via LU; `None` when numerically singular.
    pub fn solve(&self, rhs: &CMatrix) -> Option<Self> {
        self.m
            .clone()
            .lu()
            .solve(rhs.as_dmatrix())
            .map(CMatrix::from_dmatrix)
    }

    /// Entrywise maximum absolute difference.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.rows(), other.rows());
        assert_eq!(self.cols(), other.cols());
        let mut d = 0.0f64;
        for (a, b) in self.m.iter().zip(other.m.iter()) {
            d = d.max((a - b).norm());
        }
        d
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.m[idx]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix::from_dmatrix(&self.m + &rhs.m)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix::from_dmatrix(&self.m - &rhs.m)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix::from_dmatrix(&self.m * &rhs.m)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.map(|z| -z)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data: self
                .entries_row_major()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.data.len() != repr.rows * repr.cols {
            return Err(D::Error::custom(format!(
                "matrix data length {} does not match {}x{}",
                repr.data.len(),
                repr.rows,
                repr.cols
            )));
        }
        let entries: Vec<Complex64> = repr
            .data
            .iter()
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        Ok(CMatrix::from_rows(repr.rows, repr.cols, entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn row_major_layout() {
        let a = CMatrix::from_real_rows(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(a.get(0, 2), c(3.0, 0.0));
        assert_eq!(a.get(1, 0), c(4.0, 0.0));
        assert_eq!(
            a.entries_row_major(),
            (1..=6).map(|k| c(k as f64, 0.0)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn adjoint_conjugates() {
        let a = CMatrix::from_rows(2, 2, vec![c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0), c(0.0, -4.0)]);
        let ah = a.adjoint();
        assert_eq!(ah.get(0, 1), c(3.0, 0.0));
        assert_eq!(ah.get(1, 0), c(0.0, -1.0));
        assert_eq!(ah.get(0, 0), c(1.0, -2.0));
    }

    #[test]
    fn hermitian_part_is_exactly_hermitian() {
        let a = CMatrix::from_rows(2, 2, vec![c(1.0, 0.3), c(2.0, -1.0), c(0.5, 0.1), c(-1.0, 2.0)]);
        let h = a.hermitian_part();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(h.get(i, j), h.get(j, i).conj());
            }
        }
    }

    #[test]
    fn powu_and_block_ops() {
        let a = CMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(a.powu(2).is_zero());
        assert_eq!(a.powu(0), CMatrix::identity(2));

        let d = CMatrix::block_diag(&[&CMatrix::identity(1), &a]);
        assert_eq!(d.rows(), 3);
        assert_eq!(d.get(1, 2), c(1.0, 0.0));
        assert_eq!(d.block(1, 1, 2, 2), a);
    }

    #[test]
    fn serde_round_trip() {
        let a = CMatrix::from_rows(2, 2, vec![c(1.5, -0.25), c(0.0, 1.0), c(2.0, 0.0), c(-3.5, 4.0)]);
        let s = serde_json::to_string(&a).unwrap();
        let b: CMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
