//! Dense complex matrices in row-major order.
//!
//! Vectors are column matrices (`cols == 1`). Arithmetic operators on
//! references panic on shape mismatch, the same way `nalgebra` does; the
//! public entry points of the other modules validate shapes up front and
//! report [`Error`]s instead.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use num_complex::Complex64 as C64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Absolute comparison threshold used by every norm-based check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps >= 0.0 {
            Ok(Self { eps })
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    /// The same tolerance scaled by `factor`.
    pub fn scaled(self, factor: f64) -> f64 {
        self.eps * factor
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps: Self::DEFAULT_EPS,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape { rows, cols });
        }
        let len = rows
            .checked_mul(cols)
            .ok_or(Error::ShapeOverflow(rows, cols))?;
        if data.len() != len {
            return Err(Error::BadLength {
                rows,
                cols,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from separate real and imaginary row-major parts.
    pub fn from_parts(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::BadLength {
                rows,
                cols,
                found: re.len().min(im.len()),
            });
        }
        let data = re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect();
        Self::from_row_major(rows, cols, data)
    }

    /// Real matrix from nested rows. Panics on ragged input; meant for
    /// constants and tests.
    pub fn from_real_rows<const C: usize>(rows: &[[f64; C]]) -> Self {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::raw(rows.len(), C, data)
    }

    /// Complex matrix from nested rows. Panics on ragged input.
    pub fn from_rows<const C: usize>(rows: &[[C64; C]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::raw(rows.len(), C, data)
    }

    pub(crate) fn raw(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix shape {rows}x{cols}");
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::raw(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::raw(rows, cols, data)
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    /// Column vector from its entries.
    pub fn column(entries: Vec<C64>) -> Self {
        let n = entries.len();
        Self::raw(n, 1, entries)
    }

    /// The standard basis vector `e_index` of length `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        Self::from_fn(dim, 1, |i, _| if i == index { ONE } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_vector(&self) -> bool {
        self.cols == 1
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Option<C64> {
        (row < self.rows && col < self.cols).then(|| self.data[row * self.cols + col])
    }

    pub fn col(&self, j: usize) -> ComplexMatrix {
        Self::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    pub fn set_col(&mut self, j: usize, v: &ComplexMatrix) {
        assert_eq!(v.rows, self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v.data[i];
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> ComplexMatrix {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> ComplexMatrix {
        Self::raw(self.rows, self.cols, self.data.iter().map(|&z| f(z)).collect())
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> ComplexMatrix {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Euclidean norm; identical to the Frobenius norm for vectors.
    pub fn norm(&self) -> f64 {
        self.frobenius_norm()
    }

    /// `⟨self|other⟩` for column vectors (antilinear in the first slot).
    pub fn inner(&self, other: &ComplexMatrix) -> C64 {
        assert_eq!(self.shape(), other.shape(), "inner product shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|self⟩⟨other|` for column vectors.
    pub fn outer(&self, other: &ComplexMatrix) -> ComplexMatrix {
        Self::from_fn(self.rows, other.rows, |i, j| self.data[i] * other.data[j].conj())
    }

    /// `‖self − other‖_F`; panics on shape mismatch.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "distance shape mismatch");
        libm::sqrt(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum(),
        )
    }

    /// Checked matrix product.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        let mut out = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out[i * other.cols..(i + 1) * other.cols].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::raw(self.rows, other.cols, out))
    }

    /// Kronecker product; block `(i, j)` of the result is `self[i, j] · other`.
    pub fn kron(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        let rows = self
            .rows
            .checked_mul(other.rows)
            .ok_or(Error::ShapeOverflow(self.rows, other.rows))?;
        let cols = self
            .cols
            .checked_mul(other.cols)
            .ok_or(Error::ShapeOverflow(self.cols, other.cols))?;
        rows.checked_mul(cols)
            .ok_or(Error::ShapeOverflow(rows, cols))?;
        Ok(Self::from_fn(rows, cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        }))
    }

    /// Largest entrywise modulus; handy for "exactly equal" style checks.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖H − H†‖_F`. Panics on non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        self.distance(&self.adjoint())
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        match self.matmul(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "addition shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix::raw(self.rows, self.cols, data)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "subtraction shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix::raw(self.rows, self.cols, data)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product of two matrices.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b)
}

/// Conjugate transpose of `a`.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}
