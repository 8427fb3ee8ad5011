//! Matrices whose entries are homogeneous forms.
//!
//! A [`PencilMatrix`] stores a matrix of linear forms in `v` variables as
//! `v` constant coefficient matrices; products of two pencils expand into a
//! [`QuadMatrix`], one coefficient matrix per degree-2 monomial. The general
//! [`PolyMatrix`] (mixed-degree entries) backs the symbolic Krylov
//! computations, where column degrees grow with word length.

use crate::field::{FieldConfig, Scalar};
use crate::linalg::Matrix;
use crate::poly::{monomials, HomogPoly};

/// Matrix of homogeneous linear forms in `num_vars` variables, stored
/// coefficientwise: `P = sum_k coeffs[k] * t_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilMatrix {
    rows: usize,
    cols: usize,
    num_vars: usize,
    coeffs: Vec<Matrix>,
}

impl PencilMatrix {
    pub fn new(coeffs: Vec<Matrix>) -> Self {
        assert!(!coeffs.is_empty(), "a pencil needs at least one coefficient");
        let rows = coeffs[0].rows();
        let cols = coeffs[0].cols();
        for c in &coeffs {
            assert_eq!((c.rows(), c.cols()), (rows, cols), "coefficient shape mismatch");
            assert_eq!(c.field(), coeffs[0].field(), "field mismatch");
        }
        PencilMatrix {
            rows,
            cols,
            num_vars: coeffs.len(),
            coeffs,
        }
    }

    pub fn zeros(rows: usize, cols: usize, num_vars: usize, field: FieldConfig) -> Self {
        PencilMatrix::new(vec![Matrix::zeros(rows, cols, field); num_vars])
    }

    /// `m * t_k` as a pencil in `num_vars` variables.
    pub fn single(m: &Matrix, var: usize, num_vars: usize) -> Self {
        let mut coeffs = vec![Matrix::zeros(m.rows(), m.cols(), m.field()); num_vars];
        coeffs[var] = m.clone();
        PencilMatrix::new(coeffs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn field(&self) -> FieldConfig {
        self.coeffs[0].field()
    }

    pub fn coeff(&self, k: usize) -> &Matrix {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// Evaluation at a point, `sum_k coeffs[k] * point[k]`.
    pub fn evaluate(&self, point: &[Scalar]) -> Matrix {
        assert_eq!(point.len(), self.num_vars, "point dimension mismatch");
        let mut acc = Matrix::zeros(self.rows, self.cols, self.field());
        for (k, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&c.scale(&point[k]));
        }
        acc
    }

    pub fn add(&self, rhs: &PencilMatrix) -> PencilMatrix {
        assert_eq!(self.num_vars, rhs.num_vars);
        PencilMatrix::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &PencilMatrix) -> PencilMatrix {
        assert_eq!(self.num_vars, rhs.num_vars);
        PencilMatrix::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn neg(&self) -> PencilMatrix {
        PencilMatrix::new(self.coeffs.iter().map(Matrix::neg).collect())
    }

    pub fn transpose(&self) -> PencilMatrix {
        PencilMatrix::new(self.coeffs.iter().map(Matrix::transpose).collect())
    }

    /// Left-multiplies every coefficient by a constant matrix.
    pub fn left_mul(&self, m: &Matrix) -> PencilMatrix {
        PencilMatrix::new(self.coeffs.iter().map(|c| m.mul(c)).collect())
    }

    /// Right-multiplies every coefficient by a constant matrix.
    pub fn right_mul(&self, m: &Matrix) -> PencilMatrix {
        PencilMatrix::new(self.coeffs.iter().map(|c| c.mul(m)).collect())
    }

    /// Product of two pencils, expanded as a degree-2 matrix form.
    pub fn mul(&self, rhs: &PencilMatrix) -> QuadMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in pencil product");
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = QuadMatrix::zeros(self.rows, rhs.cols, self.num_vars, self.field());
        for k in 0..self.num_vars {
            for l in 0..self.num_vars {
                let idx = quad_index(self.num_vars, k.min(l), k.max(l));
                let prod = self.coeffs[k].mul(&rhs.coeffs[l]);
                out.coeffs[idx] = out.coeffs[idx].add(&prod);
            }
        }
        out
    }

    /// `[self, rhs] = self*rhs - rhs*self` as a degree-2 matrix form.
    pub fn commutator(&self, rhs: &PencilMatrix) -> QuadMatrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// The `(i, j)` entry as a linear [`HomogPoly`].
    pub fn entry_poly(&self, i: usize, j: usize) -> HomogPoly {
        let coeffs: Vec<Scalar> = self.coeffs.iter().map(|c| c.get(i, j).clone()).collect();
        HomogPoly::linear_form(self.field(), &coeffs)
    }

    pub fn to_poly_matrix(&self) -> PolyMatrix {
        let entries = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| self.entry_poly(i, j))
            .collect();
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            num_vars: self.num_vars,
            field: self.field(),
            entries,
        }
    }

    pub fn map_to_field(&self, target: FieldConfig) -> crate::error::Result<PencilMatrix> {
        Ok(PencilMatrix::new(
            self.coeffs
                .iter()
                .map(|c| c.map_to_field(target))
                .collect::<crate::error::Result<Vec<_>>>()?,
        ))
    }
}

/// Position of the degree-2 monomial `t_k t_l` (`k <= l`) in the descending
/// lex order used by [`monomials`].
pub fn quad_index(num_vars: usize, k: usize, l: usize) -> usize {
    debug_assert!(k <= l && l < num_vars);
    let mut e = vec![0u32; num_vars];
    e[k] += 1;
    e[l] += 1;
    monomials(num_vars, 2)
        .iter()
        .position(|m| *m == e)
        .expect("degree-2 monomial present")
}

/// Homogeneous degree-2 matrix form: one constant coefficient matrix per
/// degree-2 monomial, in the [`monomials`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadMatrix {
    rows: usize,
    cols: usize,
    num_vars: usize,
    coeffs: Vec<Matrix>,
}

impl QuadMatrix {
    pub fn zeros(rows: usize, cols: usize, num_vars: usize, field: FieldConfig) -> Self {
        let n = monomials(num_vars, 2).len();
        QuadMatrix {
            rows,
            cols,
            num_vars,
            coeffs: vec![Matrix::zeros(rows, cols, field); n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn add(&self, rhs: &QuadMatrix) -> QuadMatrix {
        assert_eq!(self.num_vars, rhs.num_vars);
        QuadMatrix {
            rows: self.rows,
            cols: self.cols,
            num_vars: self.num_vars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &QuadMatrix) -> QuadMatrix {
        assert_eq!(self.num_vars, rhs.num_vars);
        QuadMatrix {
            rows: self.rows,
            cols: self.cols,
            num_vars: self.num_vars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }

    /// Coefficient matrices in monomial order.
    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// Evaluation at a point.
    pub fn evaluate(&self, point: &[Scalar]) -> Matrix {
        assert_eq!(point.len(), self.num_vars);
        let field = self.coeffs[0].field();
        let mut acc = Matrix::zeros(self.rows, self.cols, field);
        for (m, c) in monomials(self.num_vars, 2).iter().zip(&self.coeffs) {
            let mut s = field.one();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    s = s.mul(&point[i]);
                }
            }
            acc = acc.add(&c.scale(&s));
        }
        acc
    }

    /// Conjugates every coefficient: `g * C * g^{-1}`.
    pub fn conjugate(&self, g: &Matrix, g_inv: &Matrix) -> QuadMatrix {
        QuadMatrix {
            rows: self.rows,
            cols: self.cols,
            num_vars: self.num_vars,
            coeffs: self.coeffs.iter().map(|c| g.mul(c).mul(g_inv)).collect(),
        }
    }
}

/// Matrix of homogeneous polynomials with per-entry degrees (uniform within
/// the uses here: every column has a single degree).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    num_vars: usize,
    field: FieldConfig,
    entries: Vec<HomogPoly>, // row-major
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, num_vars: usize, field: FieldConfig, entries: Vec<HomogPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        for e in &entries {
            assert_eq!(e.num_vars(), num_vars);
        }
        PolyMatrix {
            rows,
            cols,
            num_vars,
            field,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &HomogPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn hstack(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut entries = Vec::with_capacity(self.entries.len() + rhs.entries.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries.push(self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                entries.push(rhs.get(i, j).clone());
            }
        }
        PolyMatrix::new(self.rows, self.cols + rhs.cols, self.num_vars, self.field, entries)
    }

    /// Product; entry degrees add.
    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = self.get(i, 0).mul(rhs.get(0, j));
                for k in 1..self.cols {
                    acc = acc.add(&self.get(i, k).mul(rhs.get(k, j)));
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(self.rows, rhs.cols, self.num_vars, self.field, entries)
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Matrix {
        let data = self.entries.iter().map(|e| e.eval(point)).collect();
        Matrix::new(self.rows, self.cols, self.field, data)
    }

    /// Determinant of the square submatrix on `col_idx`, by Laplace
    /// expansion (the matrices here are tiny).
    pub fn minor_det(&self, col_idx: &[usize]) -> HomogPoly {
        assert_eq!(col_idx.len(), self.rows, "maximal minor expected");
        let rows: Vec<usize> = (0..self.rows).collect();
        self.det_rec(&rows, col_idx)
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize]) -> HomogPoly {
        assert_eq!(rows.len(), cols.len());
        let n = rows.len();
        if n == 0 {
            return HomogPoly::constant(self.num_vars, self.field.one());
        }
        if n == 1 {
            return self.get(rows[0], cols[0]).clone();
        }
        let degree: usize = cols.iter().map(|&j| self.get(rows[0], j).degree()).sum();
        let mut acc = HomogPoly::zero(self.num_vars, degree, self.field);
        let sub_rows = &rows[1..];
        for (k, &j) in cols.iter().enumerate() {
            let e = self.get(rows[0], j);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, &c)| c)
                .collect();
            let mut term = e.mul(&self.det_rec(sub_rows, &rest));
            if k % 2 == 1 {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldConfig = FieldConfig::Rational;

    fn pencil_1x2(rows: &[[i64; 2]; 2]) -> PencilMatrix {
        // coefficients of z0 and z1 for a 1x2 pencil
        PencilMatrix::new(vec![
            Matrix::from_i64(1, 2, Q, &rows[0]),
            Matrix::from_i64(1, 2, Q, &rows[1]),
        ])
    }

    #[test]
    fn evaluate_at_basis_points() {
        let p = pencil_1x2(&[[1, 0], [0, 1]]); // (z0, z1)
        let one = Q.one();
        let zero = Q.zero();
        let at0 = p.evaluate(&[one.clone(), zero.clone()]);
        assert_eq!(at0, Matrix::from_i64(1, 2, Q, &[1, 0]));
        let at1 = p.evaluate(&[zero, one]);
        assert_eq!(at1, Matrix::from_i64(1, 2, Q, &[0, 1]));
    }

    #[test]
    fn product_expands_to_zero_for_orthogonal_pencils() {
        // (z0, z1) * (-z1, z0)^T = -z0 z1 + z1 z0 = 0
        let i = pencil_1x2(&[[1, 0], [0, 1]]);
        let j = PencilMatrix::new(vec![
            Matrix::from_i64(2, 1, Q, &[0, 1]),
            Matrix::from_i64(2, 1, Q, &[-1, 0]),
        ]);
        assert!(i.mul(&j).is_zero());
        // the opposite order is rank-one and nonzero
        assert!(!j.mul(&i).is_zero());
    }

    #[test]
    fn commutator_of_constants() {
        // d = 0: single variable, [A, B] with A = E12, B = E21
        let a = PencilMatrix::new(vec![Matrix::from_i64(2, 2, Q, &[0, 1, 0, 0])]);
        let b = PencilMatrix::new(vec![Matrix::from_i64(2, 2, Q, &[0, 0, 1, 0])]);
        let c = a.commutator(&b);
        assert_eq!(c.coeffs()[0], Matrix::from_i64(2, 2, Q, &[1, 0, 0, -1]));
    }

    #[test]
    fn product_evaluation_compatibility() {
        let p = pencil_1x2(&[[2, -1], [3, 5]]);
        let q = PencilMatrix::new(vec![
            Matrix::from_i64(2, 1, Q, &[1, 4]),
            Matrix::from_i64(2, 1, Q, &[-2, 7]),
        ]);
        let prod = p.mul(&q);
        let pt = [Q.from_i64(3), Q.from_i64(-2)];
        assert_eq!(prod.evaluate(&pt), p.evaluate(&pt).mul(&q.evaluate(&pt)));
    }

    #[test]
    fn quad_index_matches_monomial_order() {
        // two variables: z0^2, z0 z1, z1^2
        assert_eq!(quad_index(2, 0, 0), 0);
        assert_eq!(quad_index(2, 0, 1), 1);
        assert_eq!(quad_index(2, 1, 1), 2);
    }

    #[test]
    fn minor_det_on_poly_matrix() {
        // det [[z0, z1], [z1, z0]] = z0^2 - z1^2
        let z0 = HomogPoly::variable(2, 0, Q);
        let z1 = HomogPoly::variable(2, 1, Q);
        let m = PolyMatrix::new(
            2,
            2,
            2,
            Q,
            vec![z0.clone(), z1.clone(), z1.clone(), z0.clone()],
        );
        let det = m.minor_det(&[0, 1]);
        let expect = z0.mul(&z0).sub(&z1.mul(&z1));
        assert_eq!(det, expect);
    }
}
