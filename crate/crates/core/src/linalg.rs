//! Dense matrices over [`Scalar`].
//!
//! Exact matrices are eliminated exactly (Bareiss for determinant and rank,
//! Gauss-Jordan over `Q(i)` for nullspaces and solves). As soon as one entry
//! is approximate the whole matrix is treated in approximate mode, with the
//! pivot cutoff `epsilon * (largest entry)`.

use std::fmt;

use thiserror::Error;

use crate::scalars::{Scalar, Tolerance};

pub type Vector = Vec<Scalar>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, LinalgError> {
        if rows * cols != data.len() {
            return Err(LinalgError::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    /// Matrix unit `e_{ij}` (0-based indices) of size `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        m.set(i, j, Scalar::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_columns(cols: &[Vector]) -> Result<Self, LinalgError> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(LinalgError::Dimension("columns of different lengths".into()));
        }
        let mut m = Matrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
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

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(Scalar::is_exact)
    }

    pub fn to_approx(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::to_approx).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.to_complex().norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    pub fn is_zero_within(&self, tol: Tolerance) -> bool {
        self.data.iter().all(|v| v.is_zero_within(tol))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn approx_eq(&self, other: &Matrix, tol: Tolerance) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    fn check_same_shape(&self, other: &Matrix, op: &str) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Dimension(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc += &(a * b);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::Dimension(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Scalar::zero(), |acc, k| {
                    let a = self.get(i, k);
                    if a.is_zero() || v[k].is_zero() {
                        acc
                    } else {
                        &acc + &(a * &v[k])
                    }
                })
            })
            .collect())
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if !self.is_square() || !other.is_square() || self.rows != other.rows {
            return Err(LinalgError::Dimension(format!(
                "commutator of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Row-major flattening, used to stack matrices as columns.
    pub fn flatten(&self) -> Vector {
        self.data.clone()
    }

    pub fn rank(&self, tol: Tolerance) -> usize {
        if self.is_exact() {
            bareiss(self.clone()).rank
        } else {
            rref(self, tol).pivots.len()
        }
    }

    pub fn det(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Dimension(format!(
                "determinant of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(Scalar::one());
        }
        if self.is_exact() {
            Ok(bareiss(self.clone()).det)
        } else {
            Ok(lu_det(&self.to_approx()))
        }
    }

    /// Basis of the kernel. Empty iff the matrix is injective.
    pub fn nullspace(&self, tol: Tolerance) -> Vec<Vector> {
        let r = rref(self, tol);
        let pivot_cols: Vec<usize> = r.pivots.iter().map(|&(_, c)| c).collect();
        let exact = r.matrix.is_exact();
        let zero = || {
            if exact {
                Scalar::zero()
            } else {
                Scalar::approx(0.0, 0.0)
            }
        };
        let one = || {
            if exact {
                Scalar::one()
            } else {
                Scalar::approx(1.0, 0.0)
            }
        };
        (0..self.cols)
            .filter(|c| !pivot_cols.contains(c))
            .map(|free| {
                let mut v = vec![zero(); self.cols];
                v[free] = one();
                for &(row, col) in &r.pivots {
                    v[col] = -r.matrix.get(row, free);
                }
                v
            })
            .collect()
    }

    /// Solves `A x = b` for square invertible `A`.
    pub fn solve(&self, b: &[Scalar], tol: Tolerance) -> Result<Vector, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Dimension(format!(
                "solve needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if b.len() != self.rows {
            return Err(LinalgError::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n, b[i].clone());
        }
        let r = rref_limited(&aug, tol, n);
        if r.pivots.len() < n {
            return Err(LinalgError::Singular {
                rank: r.pivots.len(),
                size: n,
            });
        }
        Ok((0..n).map(|i| r.matrix.get(i, n).clone()).collect())
    }

    pub fn inverse(&self, tol: Tolerance) -> Result<Matrix, LinalgError> {
        let n = self.rows;
        let cols = (0..n)
            .map(|j| {
                let e: Vector = (0..n)
                    .map(|i| if i == j { Scalar::one() } else { Scalar::zero() })
                    .collect();
                self.solve(&e, tol)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_columns(&cols)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

struct BareissResult {
    rank: usize,
    det: Scalar,
}

/// Fraction-free elimination. For square input, `det` is the determinant;
/// for rectangular input only `rank` is meaningful.
fn bareiss(mut m: Matrix) -> BareissResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = Scalar::one();
    let mut sign = false;
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let Some(p) = (rank..rows).find(|&r| !m.get(r, col).is_zero()) else {
            col += 1;
            continue;
        };
        if p != rank {
            for j in 0..cols {
                m.data.swap(p * cols + j, rank * cols + j);
            }
            sign = !sign;
        }
        let pivot = m.get(rank, col).clone();
        for i in rank + 1..rows {
            let lead = m.get(i, col).clone();
            for j in col + 1..cols {
                let v = &(&(&pivot * m.get(i, j)) - &(&lead * m.get(rank, j))) / &prev;
                m.set(i, j, v);
            }
            m.set(i, col, Scalar::zero());
        }
        prev = pivot;
        rank += 1;
        col += 1;
    }
    let det = if rows == cols && rank == rows {
        if sign {
            -m.get(rows - 1, cols - 1)
        } else {
            m.get(rows - 1, cols - 1).clone()
        }
    } else {
        Scalar::zero()
    };
    BareissResult { rank, det }
}

fn lu_det(m: &Matrix) -> Scalar {
    let n = m.rows;
    let mut a: Vec<num_complex::Complex64> = m.data.iter().map(Scalar::to_complex).collect();
    let mut det = num_complex::Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x * n + k].norm().total_cmp(&a[y * n + k].norm()))
            .unwrap();
        if a[p * n + k].norm() == 0.0 {
            return Scalar::approx(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(p * n + j, k * n + j);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        det *= piv;
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            for j in k..n {
                let t = a[k * n + j];
                a[i * n + j] -= f * t;
            }
        }
    }
    Scalar::Approx(det)
}

pub(crate) struct Rref {
    pub matrix: Matrix,
    /// (row, column) of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

pub(crate) fn rref(m: &Matrix, tol: Tolerance) -> Rref {
    rref_limited(m, tol, m.cols)
}

/// Reduced row echelon form, pivoting only within the first `pivot_cols`
/// columns. Approximate input uses partial pivoting and treats entries at or
/// below `epsilon * max|entry|` as zero.
pub(crate) fn rref_limited(m: &Matrix, tol: Tolerance, pivot_cols: usize) -> Rref {
    let exact = m.is_exact();
    let mut a = if exact { m.clone() } else { m.to_approx() };
    let (rows, cols) = (a.rows, a.cols);
    let scale = {
        let mut mx = 0.0f64;
        for i in 0..rows {
            for j in 0..pivot_cols {
                mx = mx.max(a.get(i, j).abs());
            }
        }
        mx
    };
    let cutoff = tol.epsilon * scale;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..pivot_cols {
        if row >= rows {
            break;
        }
        let candidate = if exact {
            (row..rows).find(|&r| !a.get(r, col).is_zero())
        } else {
            (row..rows)
                .max_by(|&x, &y| a.get(x, col).abs().total_cmp(&a.get(y, col).abs()))
                .filter(|&r| a.get(r, col).abs() > cutoff)
        };
        let Some(p) = candidate else {
            if !exact {
                for r in row..rows {
                    a.set(r, col, Scalar::approx(0.0, 0.0));
                }
            }
            continue;
        };
        if p != row {
            for j in 0..cols {
                a.data.swap(p * cols + j, row * cols + j);
            }
        }
        let inv = a.get(row, col).recip().expect("nonzero pivot");
        for j in 0..cols {
            let v = a.get(row, j) * &inv;
            a.set(row, j, v);
        }
        for r in 0..rows {
            if r == row {
                continue;
            }
            let f = a.get(r, col).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = a.get(r, j) - &(&f * a.get(row, j));
                a.set(r, j, v);
            }
            if !exact {
                a.set(r, col, Scalar::approx(0.0, 0.0));
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    Rref { matrix: a, pivots }
}

/// Canonical basis (nonzero RREF rows) of the span of `vectors`.
pub fn span_basis(vectors: &[Vector], dim: usize, tol: Tolerance) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec()).expect("vectors of equal length");
    debug_assert_eq!(m.cols, dim);
    let r = rref(&m, tol);
    r.pivots.iter().map(|&(row, _)| r.matrix.row(row)).collect()
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Scalar], s: &Scalar) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn vec_is_zero_within(a: &[Scalar], tol: Tolerance) -> bool {
    a.iter().all(|x| x.is_zero_within(tol))
}

pub fn vec_norm(a: &[Scalar]) -> f64 {
    a.iter().map(|x| x.to_complex().norm_sqr()).sum::<f64>().sqrt()
}

pub fn basis_vector(n: usize, i: usize) -> Vector {
    (0..n)
        .map(|k| if k == i { Scalar::one() } else { Scalar::zero() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(n, i - 1, j - 1)
    }

    fn ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn commutator_of_units() {
        let c = e(2, 1, 2).commutator(&e(2, 2, 1)).unwrap();
        assert_eq!(c, e(2, 1, 1).sub(&e(2, 2, 2)).unwrap());
        let a = ints(&[&[1, 2], &[3, 4]]);
        assert!(a.commutator(&a).unwrap().is_zero());
        let x = e(3, 1, 2).sub(&e(3, 2, 3)).unwrap();
        let y = e(3, 1, 2).add(&e(3, 2, 3)).unwrap();
        assert_eq!(x.commutator(&y).unwrap(), e(3, 1, 3).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn commutator_size_mismatch() {
        assert!(matches!(
            Matrix::identity(2).commutator(&Matrix::identity(3)),
            Err(LinalgError::Dimension(_))
        ));
        assert!(Matrix::zeros(2, 3).commutator(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn nullspace_examples() {
        let tol = Tolerance::default();
        assert!(Matrix::identity(3).nullspace(tol).is_empty());
        assert_eq!(Matrix::zeros(2, 2).nullspace(tol).len(), 2);
        // stacked n3 representation from the catalog, columns = flattened images
        let i3 = Matrix::identity(3);
        let r1 = i3.add(&e(3, 1, 2)).unwrap().sub(&e(3, 2, 3)).unwrap();
        let r2 = e(3, 1, 2).add(&e(3, 2, 3)).unwrap();
        let r3 = e(3, 1, 3).scale(&Scalar::from_int(2));
        let stacked = Matrix::from_columns(&[r1.flatten(), r2.flatten(), r3.flatten()]).unwrap();
        assert_eq!((stacked.rows(), stacked.cols()), (9, 3));
        assert!(stacked.nullspace(tol).is_empty());
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let tol = Tolerance::default();
        let a = ints(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        let ns = a.nullspace(tol);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn solve_examples() {
        let tol = Tolerance::default();
        let b = vec![Scalar::from_int(7), Scalar::ratio(-1, 3), Scalar::i()];
        assert_eq!(Matrix::identity(3).solve(&b, tol).unwrap(), b);
        // columns (2,0,1), (1,1,0), (2,0,0)
        let q = ints(&[&[2, 1, 2], &[0, 1, 0], &[1, 0, 0]]);
        let x = q
            .solve(&[Scalar::from_int(2), Scalar::from_int(-1), Scalar::from_int(1)], tol)
            .unwrap();
        assert_eq!(x, vec![Scalar::from_int(1), Scalar::from_int(-1), Scalar::ratio(1, 2)]);
        let err = e(2, 1, 2).solve(&[Scalar::one(), Scalar::zero()], tol);
        assert_eq!(err, Err(LinalgError::Singular { rank: 1, size: 2 }));
    }

    #[test]
    fn determinant_exact_and_approx() {
        let q = ints(&[&[2, 1, 2], &[0, 1, 0], &[1, 0, 0]]);
        assert_eq!(q.det().unwrap(), Scalar::from_int(-2));
        let qa = q.to_approx();
        assert!(qa.det().unwrap().approx_eq(&Scalar::from_int(-2), Tolerance::new(1e-12)));
        assert_eq!(ints(&[&[0, 1], &[1, 0]]).det().unwrap(), Scalar::from_int(-1));
        assert!(Matrix::zeros(2, 3).det().is_err());
    }

    #[test]
    fn approx_rank_uses_relative_cutoff() {
        let tol = Tolerance::new(1e-9);
        let m = Matrix::from_rows(vec![
            vec![Scalar::approx(1e6, 0.0), Scalar::approx(0.0, 0.0)],
            vec![Scalar::approx(0.0, 0.0), Scalar::approx(1e-4, 0.0)],
        ])
        .unwrap();
        assert_eq!(m.rank(tol), 1);
        assert_eq!(m.scale(&Scalar::approx(1e-6, 0.0)).rank(tol), 1);
        assert_eq!(m.rank(Tolerance::new(1e-12)), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let tol = Tolerance::default();
        let a = Matrix::from_rows(vec![
            vec![Scalar::from_int(1), Scalar::i()],
            vec![Scalar::ratio(1, 2), Scalar::from_int(3)],
        ])
        .unwrap();
        let inv = a.inverse(tol).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn span_basis_is_canonical() {
        let tol = Tolerance::default();
        let v = vec![
            vec![Scalar::from_int(2), Scalar::from_int(4)],
            vec![Scalar::from_int(1), Scalar::from_int(2)],
        ];
        assert_eq!(span_basis(&v, 2, tol), vec![vec![Scalar::one(), Scalar::from_int(2)]]);
    }
}
