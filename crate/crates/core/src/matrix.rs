//! Dense matrices over [`Scalar`] and invertible bilinear-form matrices.

use crate::scalars::{conjugate, Scalar, ScalarError};
use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("rows have unequal lengths")]
    Ragged,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Matrix {
        let data = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::Ragged);
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    /// Integer entries, row-major; handy for fixtures.
    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
            .expect("rectangular fixture")
    }

    pub fn diag(entries: &[Scalar]) -> Matrix {
        let n = entries.len();
        Matrix::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Scalar::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|x| x * c)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum size mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference size mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product size mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                let (a, b) = (&self[(i, k)], &other[(k, j)]);
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, k| &acc + &self[(k, k)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Result<Matrix, ScalarError> {
        let data = self.data.iter().map(conjugate).collect::<Result<_, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Result<Matrix, ScalarError> {
        Ok(self.conj()?.transpose())
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p = a[(col, col)].inv().expect("nonzero pivot");
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &p;
                inv[(col, j)] = &inv[(col, j)] * &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let da = &f * &a[(col, j)];
                    let di = &f * &inv[(col, j)];
                    a[(r, j)] -= &da;
                    inv[(r, j)] -= &di;
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = &det * &p;
            let pinv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] * &pinv;
                for j in col..n {
                    let d = &f * &a[(col, j)];
                    a[(r, j)] -= &d;
                }
            }
        }
        det
    }

    /// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        (1..=self.rows.min(self.cols))
            .map(|k| Matrix::from_fn(k, k, |i, j| self[(i, j)].clone()).det())
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Entries rendered as scalar literals, row by row.
    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect()
    }

    /// Whether every entry is a rational number.
    pub fn is_rational(&self) -> bool {
        self.data.iter().all(Scalar::is_rational)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.row_strings().join("; "))
    }
}

/// An invertible square matrix together with its exact inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormMatrix {
    entries: Matrix,
    inverse: Matrix,
}

impl FormMatrix {
    pub fn new(entries: Matrix) -> Result<FormMatrix, MatrixError> {
        if !entries.is_square() {
            return Err(MatrixError::NotSquare(entries.rows(), entries.cols()));
        }
        let inverse = entries.inverse().ok_or(MatrixError::Singular)?;
        let n = entries.rows();
        debug_assert!(entries.mul(&inverse) == Matrix::identity(n) && inverse.mul(&entries) == Matrix::identity(n));
        Ok(FormMatrix { entries, inverse })
    }

    /// `E_q = ((0, 1), (-q^-1, 0))`.
    pub fn e_q(q: &Scalar) -> Result<FormMatrix, MatrixError> {
        let qinv = q.inv().ok_or(MatrixError::Singular)?;
        FormMatrix::new(Matrix::from_rows(vec![vec![Scalar::zero(), Scalar::one()], vec![-qinv, Scalar::zero()]])?)
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[(i, j)]
    }

    pub fn inv_get(&self, i: usize, j: usize) -> &Scalar {
        &self.inverse[(i, j)]
    }

    /// `tP * self * P`.
    pub fn congruent(&self, p: &Matrix) -> Result<FormMatrix, MatrixError> {
        if p.rows() != self.size() {
            return Err(MatrixError::SizeMismatch(format!("{}x{} form vs {} rows", self.size(), self.size(), p.rows())));
        }
        FormMatrix::new(p.transpose().mul(&self.entries).mul(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(m.det(), Scalar::from_int(-2));
        assert_eq!(inv[(0, 0)], Scalar::from_int(-2));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn det_of_permuted_matrix() {
        let m = Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        assert!(m.det().is_one());
        let m = Matrix::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        assert_eq!(m.det(), Scalar::from_int(-3));
    }

    #[test]
    fn form_matrix_rejects_singular() {
        assert_eq!(FormMatrix::new(Matrix::from_ints(&[&[1, 1], &[1, 1]])), Err(MatrixError::Singular));
        assert!(matches!(FormMatrix::new(Matrix::zeros(2, 3)), Err(MatrixError::NotSquare(2, 3))));
    }

    #[test]
    fn e_q_inverse() {
        let e = FormMatrix::e_q(&Scalar::from_int(2)).unwrap();
        assert_eq!(e.inverse(), &Matrix::from_ints(&[&[0, -2], &[1, 0]]));
    }

    #[test]
    fn minors() {
        let m = Matrix::from_ints(&[&[2, 1], &[1, 3]]);
        assert_eq!(m.leading_minors(), vec![Scalar::from_int(2), Scalar::from_int(5)]);
    }
}
