use std::fmt;

use crate::fgab::FgabError;
use crate::scalar::Scalar;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Result<Self, FgabError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(FgabError::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FgabError> {
        if self.cols != other.rows {
            return Err(FgabError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.checked_mul(&other.get(k, j)).ok_or(FgabError::Overflow)?;
                    let s = out.get(i, j).checked_add(&prod).ok_or(FgabError::Overflow)?;
                    out.set(i, j, s);
                }
            }
        }
        Ok(out)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Replace rows `a`, `b` by `(x*ra + y*rb, z*ra + w*rb)`.
    pub(crate) fn combine_rows(&mut self, a: usize, b: usize, [x, y, z, w]: [T; 4]) -> Result<(), FgabError> {
        for j in 0..self.cols {
            let ra = self.get(a, j);
            let rb = self.get(b, j);
            let na = lin(x, ra, y, rb)?;
            let nb = lin(z, ra, w, rb)?;
            self.set(a, j, na);
            self.set(b, j, nb);
        }
        Ok(())
    }

    /// Replace columns `a`, `b` by `(x*ca + y*cb, z*ca + w*cb)`.
    pub(crate) fn combine_cols(&mut self, a: usize, b: usize, [x, y, z, w]: [T; 4]) -> Result<(), FgabError> {
        for i in 0..self.rows {
            let ca = self.get(i, a);
            let cb = self.get(i, b);
            let na = lin(x, ca, y, cb)?;
            let nb = lin(z, ca, w, cb)?;
            self.set(i, a, na);
            self.set(i, b, nb);
        }
        Ok(())
    }
}

fn lin<T: Scalar>(x: T, a: T, y: T, b: T) -> Result<T, FgabError> {
    let p = x.checked_mul(&a).ok_or(FgabError::Overflow)?;
    let q = y.checked_mul(&b).ok_or(FgabError::Overflow)?;
    p.checked_add(&q).ok_or(FgabError::Overflow)
}

impl<T: Scalar> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}
