//! Dense matrices over `F_q` with exact Gaussian elimination.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Fe, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("vector is not in the row space")]
    NotInRowSpace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<Field>,
    ncols: usize,
    rows: Vec<Vec<Fe>>,
}

impl Matrix {
    pub fn from_rows(field: Arc<Field>, rows: Vec<Vec<Fe>>) -> Result<Self, LinalgError> {
        let ncols = rows.first().map_or(0, Vec::len);
        Self::with_cols(field, ncols, rows)
    }

    /// Like [`Self::from_rows`] but fixes the column count, so empty matrices keep their width.
    pub fn with_cols(field: Arc<Field>, ncols: usize, rows: Vec<Vec<Fe>>) -> Result<Self, LinalgError> {
        for (row, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(LinalgError::Ragged { row, expected: ncols, got: r.len() });
            }
        }
        Ok(Matrix { field, ncols, rows })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.rows[i]
    }

    pub fn transpose(&self) -> Matrix {
        let rows = (0..self.ncols).map(|j| self.rows.iter().map(|r| r[j]).collect()).collect();
        Matrix { field: self.field.clone(), ncols: self.rows.len(), rows }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.ncols != other.nrows() {
            return Err(LinalgError::Dimension(self.ncols, other.nrows()));
        }
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| {
                        r.iter().zip(&other.rows).fold(Fe::ZERO, |acc, (&a, orow)| f.add(acc, f.mul(a, orow[j])))
                    })
                    .collect()
            })
            .collect();
        Ok(Matrix { field: self.field.clone(), ncols: other.ncols, rows })
    }

    /// `x * self` for a row vector `x`.
    pub fn combine(&self, coeffs: &[Fe]) -> Result<Vec<Fe>, LinalgError> {
        if coeffs.len() != self.nrows() {
            return Err(LinalgError::Dimension(coeffs.len(), self.nrows()));
        }
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.ncols];
        for (&c, r) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(r) {
                *o = f.add(*o, f.mul(c, a));
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form (zero rows dropped) and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
            rows.swap(r, p);
            let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c];
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, pv));
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        (Matrix { field: self.field.clone(), ncols: self.ncols, rows }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x^T = 0}` as rows.
    pub fn nullspace(&self) -> Matrix {
        let f = &self.field;
        let (e, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&fc| {
                let mut v = vec![Fe::ZERO; self.ncols];
                v[fc] = Fe::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(e.rows[r][fc]);
                }
                v
            })
            .collect();
        Matrix { field: self.field.clone(), ncols: self.ncols, rows }
    }

    pub fn in_row_space(&self, v: &[Fe]) -> bool {
        self.coordinates(v).is_ok()
    }

    /// Coefficients `x` with `x * self = v`, assuming independent rows.
    pub fn coordinates(&self, v: &[Fe]) -> Result<Vec<Fe>, LinalgError> {
        if v.len() != self.ncols {
            return Err(LinalgError::Dimension(v.len(), self.ncols));
        }
        // solve self^T x = v through elimination on the augmented system
        let f = &self.field;
        let k = self.nrows();
        let mut aug: Vec<Vec<Fe>> = (0..self.ncols)
            .map(|j| {
                let mut row: Vec<Fe> = self.rows.iter().map(|r| r[j]).collect();
                row.push(v[j]);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..k {
            let Some(p) = (r..aug.len()).find(|&i| !aug[i][c].is_zero()) else { continue };
            aug.swap(r, p);
            let inv = f.inv(aug[r][c]).expect("pivot is nonzero");
            for x in aug[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot_row = aug[r].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c];
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, pv));
                }
            }
            pivots.push(c);
            r += 1;
        }
        if aug[r..].iter().any(|row| !row[k].is_zero()) {
            return Err(LinalgError::NotInRowSpace);
        }
        let mut x = vec![Fe::ZERO; k];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug[i][k];
        }
        Ok(x)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.nrows();
        if n != self.ncols {
            return None;
        }
        let aug_rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }));
                row
            })
            .collect();
        let aug = Matrix { field: self.field.clone(), ncols: 2 * n, rows: aug_rows };
        let (e, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = e.rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Matrix { field: self.field.clone(), ncols: n, rows })
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.ncols != other.ncols {
            return Err(LinalgError::Dimension(self.ncols, other.ncols));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Matrix { field: self.field.clone(), ncols: self.ncols, rows })
    }

    /// Integer encodings, one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|a| a.code().to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_codes(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|r| r.iter().map(|a| a.code()).collect()).collect()
    }
}
