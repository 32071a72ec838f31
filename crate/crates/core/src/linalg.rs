//! Dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Relative threshold under which a triangular pivot or singular value counts as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix(pub DMatrix<Complex64>);

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Matrix(DMatrix::identity(n, n))
    }

    /// Builds from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix(DMatrix::from_row_slice(rows, cols, entries)))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Matrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.0[(i, j)] = v;
    }

    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        Matrix(&self.0 * &other.0)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (&self.0 * DVector::from_column_slice(x)).iter().copied().collect()
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix(self.0.adjoint())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols() != other.cols() {
            return Err(Error::Shape(format!(
                "cannot stack {} columns on {}",
                other.cols(),
                self.cols()
            )));
        }
        let (r1, r2) = (self.rows(), other.rows());
        Ok(Matrix::from_fn(r1 + r2, self.cols(), |i, j| {
            if i < r1 {
                self.get(i, j)
            } else {
                other.get(i - r1, j)
            }
        }))
    }
}

/// Matrix `C` with `C x = coeffs(p * x)` for `x` holding `n` ascending coefficients.
pub fn convolution_matrix(p: &[Complex64], n: usize) -> Matrix {
    let rows = (p.len() + n).saturating_sub(1);
    Matrix::from_fn(rows, n, |i, j| {
        if i >= j && i - j < p.len() {
            p[i - j]
        } else {
            Complex64::zero()
        }
    })
}

/// Householder QR of a tall matrix: thin `Q` (rows x cols) and square upper-triangular `R`.
pub fn qr(m: &Matrix) -> Result<(Matrix, Matrix)> {
    if m.rows() < m.cols() {
        return Err(Error::Shape(format!(
            "qr needs rows >= cols, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let f = m.0.clone().qr();
    Ok((Matrix(f.q()), Matrix(f.r())))
}

/// Least-squares solution of `A x ≈ b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LstsqSolution {
    pub x: Vec<Complex64>,
    /// `‖A x - b‖₂`
    pub residual: f64,
    /// A triangular pivot fell below `RANK_TOL` times the largest; `x` is then
    /// the minimum-norm solution.
    pub rank_deficient: bool,
}

/// Minimizes `‖A x - b‖₂` through QR, switching to an SVD minimum-norm
/// solution when `A` is numerically rank deficient.
pub fn lstsq(a: &Matrix, b: &[Complex64]) -> Result<LstsqSolution> {
    if a.rows() != b.len() {
        return Err(Error::Shape(format!(
            "rhs of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    if a.rows() < a.cols() {
        return Err(Error::Shape(format!(
            "lstsq needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.cols();
    let bv = DVector::from_column_slice(b);
    let (q, r) = qr(a)?;
    let diag: Vec<f64> = (0..n).map(|i| r.0[(i, i)].norm()).collect();
    let dmax = diag.iter().copied().fold(0.0, f64::max);
    let rank_deficient = n > 0 && diag.iter().any(|&d| d <= RANK_TOL * dmax);
    let x = if rank_deficient {
        let svd = a.0.clone().svd(true, true);
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        svd.solve(&bv, RANK_TOL * smax)
            .map_err(|e| Error::Shape(e.to_string()))?
    } else {
        let qtb = q.0.adjoint() * &bv;
        let mut x = DVector::from_element(n, Complex64::zero());
        for i in (0..n).rev() {
            let mut acc = qtb[i];
            for j in i + 1..n {
                acc -= r.0[(i, j)] * x[j];
            }
            x[i] = acc / r.0[(i, i)];
        }
        x
    };
    let residual = (&a.0 * &x - &bv).norm();
    Ok(LstsqSolution {
        x: x.iter().copied().collect(),
        residual,
        rank_deficient,
    })
}

/// Determinant via LU with partial pivoting.
pub fn det(m: &Matrix) -> Result<Complex64> {
    if m.rows() != m.cols() {
        return Err(Error::Shape(format!(
            "det needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(m.0.clone().lu().determinant())
}

/// Smallest singular value and a matching unit right singular vector.
/// Wide matrices are padded with zero rows so the null space is visible.
pub fn smallest_singular(m: &Matrix) -> (f64, Vec<Complex64>) {
    let (r, c) = (m.rows(), m.cols());
    let a = if r < c {
        DMatrix::from_fn(c, c, |i, j| if i < r { m.0[(i, j)] } else { Complex64::zero() })
    } else {
        m.0.clone()
    };
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let (k, &sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty matrix");
    let v = vt.row(k).iter().map(|z| z.conj()).collect();
    (sigma, v)
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.0.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}
