//! Dense matrices over an exact field with deterministic elimination.
//!
//! Pivoting picks the first nonzero entry in column order, so every result
//! (rref, kernel bases, solutions) is reproducible across runs. All values
//! are immutable after construction and operations are pure.

use std::fmt;

use crate::field::{FieldConfig, Scalar};
use crate::error::{Error, Result};

/// Row-major dense matrix with entries in a fixed [`FieldConfig`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldConfig,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, field: FieldConfig, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        for s in &data {
            assert_eq!(s.field(), field, "field mismatch");
        }
        Matrix {
            rows,
            cols,
            field,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldConfig) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldConfig) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, field: FieldConfig, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            rows,
            cols,
            field,
            data: entries.iter().map(|&n| field.from_i64(n)).collect(),
        }
    }

    /// Column vector from a slice.
    pub fn column(field: FieldConfig, entries: &[Scalar]) -> Self {
        Matrix::new(entries.len(), 1, field, entries.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "field mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Matrix::new(self.rows, self.cols, self.field, data)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(Scalar::neg).collect();
        Matrix::new(self.rows, self.cols, self.field, data)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a.mul(s)).collect();
        Matrix::new(self.rows, self.cols, self.field, data)
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = out.get(i, j).add(&a.mul(rhs.get(k, j)));
                    out.set(i, j, t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    acc = acc.add(&self.get(i, j).mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    /// Commutator `self*rhs - rhs*self`.
    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "row count mismatch in hstack");
        let mut out = Matrix::zeros(self.rows, self.cols + rhs.cols, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "column count mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix::new(self.rows + rhs.rows, self.cols, self.field, data)
    }

    pub fn col_vector(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            // first nonzero pivot in column order, for determinism
            let found = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero());
            let r = match found {
                Some(r) => r,
                None => continue,
            };
            if r != pivot_row {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(pivot_row, j).clone();
                    m.set(r, j, b);
                    m.set(pivot_row, j, a);
                }
            }
            let inv = m.get(pivot_row, col).inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.get(pivot_row, j).mul(&inv);
                m.set(pivot_row, j, v);
            }
            for i in 0..m.rows {
                if i == pivot_row || m.get(i, col).is_zero() {
                    continue;
                }
                let f = m.get(i, col).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(pivot_row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    /// Rank over the active field, by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, returned as the columns of a matrix
    /// (zero columns count when rank = cols: the result is `cols x 0`).
    ///
    /// `self * v = 0` holds exactly for every returned column `v`.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.cols, free.len(), self.field);
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.field.one());
            for (prow, &pcol) in pivots.iter().enumerate() {
                out.set(pcol, k, r.get(prow, fc).neg());
            }
        }
        out
    }

    /// One exact solution of `self * x = b` when consistent, `None` otherwise.
    pub fn solve_linear(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve_linear: {} rows vs rhs length {}",
                self.rows,
                b.len()
            )));
        }
        let aug = self.hstack(&Matrix::column(self.field, b));
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None); // pivot in the rhs column: inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = r.get(prow, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Columns of `self` forming a basis of the column space, reduced to
    /// column echelon form for determinism.
    pub fn column_space_basis(&self) -> Matrix {
        let (r, pivots) = self.transpose().rref();
        let mut out = Matrix::zeros(self.rows, pivots.len(), self.field);
        for (k, _) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, r.get(k, i).clone());
            }
        }
        out
    }

    /// Rows `phi` with `ker(phi) = colspan(self)`; empty (0 x rows) when the
    /// columns already span.
    pub fn annihilator_rows(&self) -> Matrix {
        self.transpose().kernel_basis().transpose()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let aug = self.hstack(&Matrix::identity(self.rows, self.field));
        let (r, pivots) = aug.rref();
        if pivots.len() < self.rows {
            return None;
        }
        let mut out = Matrix::zeros(self.rows, self.cols, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Indices of `candidates` columns that extend `colspan(self)` to a
    /// larger space, chosen greedily in column order.
    pub fn extend_basis_indices(&self, candidates: &Matrix) -> Vec<usize> {
        assert_eq!(self.rows, candidates.rows);
        let mut base = self.clone();
        let mut rank = base.rank();
        let mut chosen = Vec::new();
        for j in 0..candidates.cols {
            let cand = Matrix::column(self.field, &candidates.col_vector(j));
            let grown = base.hstack(&cand);
            let r = grown.rank();
            if r > rank {
                rank = r;
                base = grown;
                chosen.push(j);
            }
        }
        chosen
    }

    pub fn map_to_field(&self, target: FieldConfig) -> Result<Matrix> {
        let data = self
            .data
            .iter()
            .map(|s| s.to_field(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::new(self.rows, self.cols, target, data))
    }
}

/// dim(colspan(a) ∩ colspan(b)) via rank(a) + rank(b) − rank[a|b].
pub fn intersection_dim(a: &Matrix, b: &Matrix) -> usize {
    a.rank() + b.rank() - a.hstack(b).rank()
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.get(i, j).canonical_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldConfig = FieldConfig::Rational;

    #[test]
    fn rank_identity_zero_and_dependent_rows() {
        assert_eq!(Matrix::identity(3, Q).rank(), 3);
        assert_eq!(Matrix::zeros(2, 5, Q).rank(), 0);
        // second row is twice the first: rank 1 (row reduction by hand)
        let m = Matrix::from_i64(2, 3, Q, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_basis_cases() {
        assert_eq!(Matrix::identity(4, Q).kernel_basis().cols(), 0);
        let z = Matrix::zeros(2, 3, Q);
        assert_eq!(z.kernel_basis().cols(), 3);
        let m = Matrix::from_i64(1, 2, Q, &[1, 1]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        // proportional to (1, -1)
        let v = k.col_vector(0);
        assert_eq!(v[0], v[1].neg());
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_cases() {
        let b: Vec<Scalar> = [3, -5].iter().map(|&n| Q.from_i64(n)).collect();
        let id = Matrix::identity(2, Q);
        assert_eq!(id.solve_linear(&b).unwrap().unwrap(), b);

        let z = Matrix::zeros(2, 2, Q);
        assert!(z.solve_linear(&b).unwrap().is_none());

        let m = Matrix::from_i64(2, 2, Q, &[1, 2, 2, 4]);
        let rhs: Vec<Scalar> = [1, 2].iter().map(|&n| Q.from_i64(n)).collect();
        let x = m.solve_linear(&rhs).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), rhs); // substitution check

        assert!(m.solve_linear(&b[..1]).is_err());
        assert!(m.solve_linear(&[Q.from_i64(1), Q.from_i64(3)]).unwrap().is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(2, 2, Q, &[2, 1, 7, 4]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, Q));
        assert!(Matrix::from_i64(2, 2, Q, &[1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn annihilator_and_intersection() {
        // colspan of (1,0), (0,1) inside Q^3: annihilator is one row
        let m = Matrix::from_i64(3, 2, Q, &[1, 0, 0, 1, 0, 0]);
        let ann = m.annihilator_rows();
        assert_eq!(ann.rows(), 1);
        assert!(ann.mul(&m).is_zero());

        let a = Matrix::from_i64(3, 2, Q, &[1, 0, 0, 1, 0, 0]);
        let b = Matrix::from_i64(3, 2, Q, &[0, 0, 1, 0, 0, 1]);
        assert_eq!(intersection_dim(&a, &b), 1);
    }

    #[test]
    fn modular_rank_matches_rational() {
        let f = FieldConfig::fp(101).unwrap();
        let entries = &[3, 1, 4, 1, 5, 9, 2, 6, 5];
        let mq = Matrix::from_i64(3, 3, Q, entries);
        let mp = Matrix::from_i64(3, 3, f, entries);
        assert_eq!(mq.rank(), mp.rank());
    }
}
