//! Dense matrices over a finite field.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::Mask;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>, // row-major
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Build from integer encodings, validating each entry against the field.
    pub fn from_values(field: &F, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.elem(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(field, cols, rows)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn values(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&a| self.field.value(a)).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| self.field.is_zero(a))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self[(i, t)];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = f.add(out[(i, j)], f.mul(a, other[(t, j)]));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v · self`.
    pub fn left_mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, &a) in v.iter().enumerate().take(self.rows) {
            if f.is_zero(a) {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(a, b));
            }
        }
        out
    }

    /// Matrix times column vector: `self · vᵀ`.
    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Keep exactly the columns in `set`, in increasing order.
    pub fn select_columns(&self, set: Mask) -> Result<Self> {
        self.check_mask(set)?;
        let keep: Vec<usize> = (0..self.cols).filter(|&j| set >> j & 1 == 1).collect();
        let mut out = Self::zeros(&self.field, self.rows, keep.len());
        for i in 0..self.rows {
            for (t, &j) in keep.iter().enumerate() {
                out[(i, t)] = self[(i, j)];
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    fn check_mask(&self, set: Mask) -> Result<()> {
        if self.cols < Mask::BITS as usize && set >> self.cols != 0 {
            return Err(Error::IndexRange {
                index: (Mask::BITS - set.leading_zeros() - 1) as usize,
                n: self.cols,
            });
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form and its pivot columns.
    ///
    /// Columns are scanned left to right; the pivot row is the first row at
    /// or below the current position with a nonzero entry.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m[(i, c)])) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m[(r, c)]).expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = f.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                let factor = m[(i, c)];
                if i == r || f.is_zero(factor) {
                    continue;
                }
                for j in c..m.cols {
                    let t = f.mul(factor, m[(r, j)]);
                    m[(i, j)] = f.sub(m[(i, j)], t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank of the submatrix formed by the columns in `set`; 0 for the empty set.
    pub fn column_submatrix_rank(&self, set: Mask) -> Result<usize> {
        self.check_mask(set)?;
        if set == 0 {
            return Ok(0);
        }
        Ok(self.select_columns(set)?.rank())
    }

    /// Basis of `{x : self · xᵀ = 0}`, one row per free column of the RREF
    /// in increasing column order.
    pub fn null_space_basis(&self) -> Self {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis[(b, fc)] = f.one();
            for (pr, &pc) in pivots.iter().enumerate() {
                basis[(b, pc)] = f.neg(r[(pr, fc)]);
            }
        }
        basis
    }

    /// Nonzero rows of the RREF: a basis of the row space.
    pub fn row_space_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        r.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
    }
}

impl<F: Field> Index<(usize, usize)> for Matrix<F> {
    type Output = F::Elem;

    fn index(&self, (i, j): (usize, usize)) -> &F::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}
