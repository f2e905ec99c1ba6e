//! Dense complex linear algebra.
//!
//! Matrices are [`nalgebra::DMatrix`] over `Complex<f64>`. Everything in this
//! crate is at most a few dozen rows, so the routines here favour robustness
//! (SVD, Padé scaling-and-squaring) over speed.

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Absolute/relative comparison threshold: `x ≈ y` iff
/// `|x - y| <= abs + rel * max(|x|, |y|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-9, rel: 1e-9 }
    }
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    /// The allowed deviation at magnitude `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }

    pub fn approx_eq(&self, x: f64, y: f64) -> bool {
        (x - y).abs() <= self.threshold(x.abs().max(y.abs()))
    }

    /// Entrywise comparison of two matrices of equal shape.
    pub fn matrices_close(&self, a: &CMatrix, b: &CMatrix) -> bool {
        a.shape() == b.shape()
            && a.iter()
                .zip(b.iter())
                .all(|(x, y)| (x - y).norm() <= self.threshold(x.norm().max(y.norm())))
    }
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Builds a matrix from row-major real entries.
pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| r(x)))
}

/// Builds a matrix from row-major complex entries.
pub fn from_rows(rows: usize, cols: usize, data: &[Complex64]) -> CMatrix {
    CMatrix::from_row_slice(rows, cols, data)
}

pub fn diag(values: &[Complex64]) -> CMatrix {
    let mut m = zeros(values.len(), values.len());
    for (k, v) in values.iter().enumerate() {
        m[(k, k)] = *v;
    }
    m
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus of `a - b`. Shapes must agree.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_diff shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `‖M - M†‖_F`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

/// `‖V†V - I‖` in max norm.
pub fn unitarity_defect(v: &CMatrix) -> f64 {
    max_diff(&(v.adjoint() * v), &identity(v.ncols()))
}

/// Row-major flattening of a matrix into a column vector.
pub fn vectorize(m: &CMatrix) -> CMatrix {
    CMatrix::from_iterator(m.len(), 1, m.transpose().iter().copied())
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &[Complex64], rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_row_slice(rows, cols, v)
}

/// Matrix inverse via LU.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    m.clone().try_inverse().ok_or(Error::Singular)
}

/// Matrix exponential by Padé scaling-and-squaring.
pub fn mat_exp(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    Ok(m.exp())
}

/// Relative singular-value cutoff used by [`lstsq`].
pub const LSTSQ_RCOND: f64 = 1e-10;

/// Minimum-norm least-squares solution of `A X = B`.
///
/// Returns `X` and the attained Frobenius residual `‖AX - B‖`.
pub fn lstsq(a: &CMatrix, b: &CMatrix) -> Result<(CMatrix, f64)> {
    lstsq_with_rcond(a, b, LSTSQ_RCOND)
}

/// [`lstsq`] with an explicit relative cutoff: singular values below
/// `rcond * σ_max` are treated as zero.
pub fn lstsq_with_rcond(a: &CMatrix, b: &CMatrix, rcond: f64) -> Result<(CMatrix, f64)> {
    if a.nrows() != b.nrows() {
        return Err(Error::Dimension(format!(
            "lstsq: A has {} rows, B has {}",
            a.nrows(),
            b.nrows()
        )));
    }
    if !is_finite(a) || !is_finite(b) {
        return Err(Error::NonFinite);
    }
    if a.ncols() == 0 || a.nrows() == 0 {
        let x = zeros(a.ncols(), b.ncols());
        return Ok((x, frobenius(b)));
    }
    let svd = SVD::new(a.clone(), true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = rcond * smax;
    let ut_b = u.adjoint() * b;
    let mut scaled = zeros(ut_b.nrows(), ut_b.ncols());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            let row = ut_b.row(k) / r(s);
            scaled.set_row(k, &row);
        }
    }
    let x = v_t.adjoint() * scaled;
    let residual = frobenius(&(a * &x - b));
    Ok((x, residual))
}

/// Orthonormal basis (as columns) of the numerical null space of `M`.
///
/// A right singular vector belongs to the null space when its singular value
/// is at most `tol.abs + tol.rel * σ_max`.
pub fn nullspace(m: &CMatrix, tol: Tolerance) -> Result<CMatrix> {
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let n = m.ncols();
    if n == 0 {
        return Ok(zeros(0, 0));
    }
    // Pad with zero rows so the SVD returns a full set of right singular vectors.
    let padded = if m.nrows() < n {
        let mut p = zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let threshold = tol.threshold(smax);
    let cols: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect();
    if cols.is_empty() {
        return Ok(zeros(n, 0));
    }
    Ok(CMatrix::from_columns(&cols))
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
pub fn eig_hermitian(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let defect = hermitian_defect(m);
    if defect > 1e-10 * frobenius(m).max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::NotHermitian { defect });
    }
    if m.nrows() == 0 {
        return Ok((vec![], m.clone()));
    }
    let sym = (m + m.adjoint()) * r(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let cols: Vec<_> = order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
    Ok((values, CMatrix::from_columns(&cols)))
}

/// Index of the entry of largest modulus; among entries within a relative
/// `1e-9` of the maximum the first in column-major storage order of a column
/// vector (row-major for matrices passed through [`vectorize`]) wins.
pub fn dominant_index(v: &[Complex64]) -> Option<usize> {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    v.iter().position(|z| z.norm() >= max * (1.0 - 1e-9))
}

/// JSON form of a matrix: `{"rows", "cols", "data": [[re, im], ...]}` in
/// row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let data = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
            .collect();
        MatrixJson { rows: m.nrows(), cols: m.ncols(), data }
    }
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<CMatrix> {
        if j.data.len() != j.rows * j.cols {
            return Err(Error::Dimension(format!(
                "matrix payload has {} entries for {}x{}",
                j.data.len(),
                j.rows,
                j.cols
            )));
        }
        let entries: Vec<_> = j.data.iter().map(|[re, im]| c(*re, *im)).collect();
        Ok(CMatrix::from_row_slice(j.rows, j.cols, &entries))
    }
}

/// `#[serde(with = "crate::linalg::matrix_serde")]` for `CMatrix` fields.
pub mod matrix_serde {
    use super::{CMatrix, MatrixJson};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        CMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Same as [`matrix_serde`] for `[CMatrix; 3]` fields.
pub mod triple_serde {
    use super::{CMatrix, MatrixJson};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[CMatrix; 3], s: S) -> Result<S::Ok, S::Error> {
        let js: Vec<MatrixJson> = m.iter().map(MatrixJson::from).collect();
        js.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[CMatrix; 3], D::Error> {
        let js = Vec::<MatrixJson>::deserialize(d)?;
        let ms: Vec<CMatrix> = js
            .into_iter()
            .map(CMatrix::try_from)
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)?;
        ms.try_into().map_err(|_| serde::de::Error::custom("expected three matrices"))
    }
}
