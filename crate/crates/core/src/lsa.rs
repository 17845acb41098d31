//! Left-symmetric algebras: the associator, the left-symmetry axiom, the
//! sub-adjacent Lie algebra, left multiplications and the kernel ideal.

use std::fmt;

use thiserror::Error;

use crate::liealg::{format_vector, BracketEntry, LieAlgebra, LieError};
use crate::linalg::{span_basis, vec_add, vec_is_zero_within, vec_scale, vec_sub, LinalgError, Matrix, Vector};
use crate::reps::{RepError, Representation};
use crate::scalars::{Scalar, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LsaError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("not left-symmetric: {} failing triple(s)", .0.len())]
    NotLeftSymmetric(Vec<LsaFailure>),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Basis triple `(i, j, k)` (0-based) with residual
/// `(e_i, e_j, e_k) - (e_j, e_i, e_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LsaFailure {
    pub triple: (usize, usize, usize),
    pub residual: Vector,
}

/// Product entry `e_i * e_j = coeffs` with 0-based indices.
pub type ProductEntry = ((usize, usize), Vector);

#[derive(Debug, Clone, PartialEq)]
pub struct LeftSymmetricAlgebra {
    name: String,
    dim: usize,
    /// `e_i * e_j` at index `i * dim + j`.
    products: Vec<Vector>,
}

impl LeftSymmetricAlgebra {
    /// Builds the algebra from its nonzero products. Repeated entries add up.
    pub fn new(name: impl Into<String>, dim: usize, entries: Vec<ProductEntry>) -> Result<Self, LsaError> {
        if dim == 0 {
            return Err(LsaError::Dimension("dimension must be positive".into()));
        }
        let mut products = vec![vec![Scalar::zero(); dim]; dim * dim];
        for ((i, j), coeffs) in entries {
            if i >= dim || j >= dim || coeffs.len() != dim {
                return Err(LsaError::Dimension(format!(
                    "product e{}*e{} with {} coefficients in dimension {dim}",
                    i + 1,
                    j + 1,
                    coeffs.len()
                )));
            }
            let slot = &mut products[i * dim + j];
            *slot = vec_add(slot, &coeffs);
        }
        Ok(LeftSymmetricAlgebra {
            name: name.into(),
            dim,
            products,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self::new("zero", dim, Vec::new()).expect("positive dimension")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_exact(&self) -> bool {
        self.products.iter().flatten().all(Scalar::is_exact)
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &Vector {
        &self.products[i * self.dim + j]
    }

    pub fn nonzero_products(&self) -> Vec<ProductEntry> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let p = self.product_basis(i, j);
                if p.iter().any(|c| !c.is_zero()) {
                    out.push(((i, j), p.clone()));
                }
            }
        }
        out
    }

    fn check_len(&self, v: &[Scalar]) -> Result<(), LsaError> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(LsaError::Dimension(format!(
                "vector of length {} in dimension {}",
                v.len(),
                self.dim
            )))
        }
    }

    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, LsaError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut acc = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc = vec_add(&acc, &vec_scale(self.product_basis(i, j), &(xi * yj)));
            }
        }
        Ok(acc)
    }

    /// `(x, y, z) = (xy)z - x(yz)`.
    pub fn associator(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Result<Vector, LsaError> {
        let xy_z = self.product(&self.product(x, y)?, z)?;
        let x_yz = self.product(x, &self.product(y, z)?)?;
        Ok(vec_sub(&xy_z, &x_yz))
    }

    fn basis_associator(&self, i: usize, j: usize, k: usize) -> Vector {
        let n = self.dim;
        let e = |t| crate::linalg::basis_vector(n, t);
        self.associator(&e(i), &e(j), &e(k)).expect("basis vectors")
    }

    /// Triples on which `(x,y,z) = (y,x,z)` fails. Only `i < j` needs
    /// checking; the diagonal and `i > j` follow by symmetry.
    pub fn check_left_symmetric(&self, tol: Tolerance) -> Vec<LsaFailure> {
        let n = self.dim;
        let mut failures = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let r = vec_sub(&self.basis_associator(i, j, k), &self.basis_associator(j, i, k));
                    if !vec_is_zero_within(&r, tol) {
                        failures.push(LsaFailure {
                            triple: (i, j, k),
                            residual: r,
                        });
                    }
                }
            }
        }
        failures
    }

    pub fn is_left_symmetric(&self, tol: Tolerance) -> bool {
        self.check_left_symmetric(tol).is_empty()
    }

    fn require_left_symmetric(&self, tol: Tolerance) -> Result<(), LsaError> {
        let failures = self.check_left_symmetric(tol);
        if failures.is_empty() {
            Ok(())
        } else {
            Err(LsaError::NotLeftSymmetric(failures))
        }
    }

    /// Commutator brackets `[e_i, e_j] = e_i e_j - e_j e_i`, for any product.
    pub fn commutator_brackets(&self) -> Vec<BracketEntry> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = vec_sub(self.product_basis(i, j), self.product_basis(j, i));
                if c.iter().any(|s| !s.is_zero()) {
                    out.push(((i, j), c));
                }
            }
        }
        out
    }

    /// The sub-adjacent Lie algebra; Jacobi is re-checked on the result.
    pub fn sub_adjacent(&self, tol: Tolerance) -> Result<LieAlgebra, LsaError> {
        self.require_left_symmetric(tol)?;
        let g = LieAlgebra::new_unchecked(self.name.clone(), self.dim, self.commutator_brackets())?;
        let failures = g.jacobi_check(tol);
        if !failures.is_empty() {
            return Err(LieError::Jacobi {
                name: self.name.clone(),
                failures,
            }
            .into());
        }
        Ok(g)
    }

    /// Matrix of `L_{e_i}`: column `j` holds `e_i * e_j`.
    pub fn left_mult(&self, i: usize) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.product_basis(i, j).clone()).collect();
        Matrix::from_columns(&cols).expect("square")
    }

    /// `e_i -> L_{e_i}` as a representation of the sub-adjacent algebra.
    pub fn left_regular_rep(&self, tol: Tolerance) -> Result<Representation, LsaError> {
        let g = self.sub_adjacent(tol)?;
        let images = (0..self.dim).map(|i| self.left_mult(i)).collect();
        Ok(Representation::new(g, images)?)
    }

    /// `N(A) = {x : L_x = 0}`.
    pub fn kernel_ideal(&self, tol: Tolerance) -> Vec<Vector> {
        let cols: Vec<Vector> = (0..self.dim).map(|i| self.left_mult(i).flatten()).collect();
        let basis = Matrix::from_columns(&cols).expect("equal lengths").nullspace(tol);
        debug_assert!(!self.is_left_symmetric(tol) || self.is_two_sided_ideal(&basis, tol));
        basis
    }

    /// Whether the span of `basis` is closed under left and right
    /// multiplication by every basis vector.
    pub fn is_two_sided_ideal(&self, basis: &[Vector], tol: Tolerance) -> bool {
        let n = self.dim;
        let base = span_basis(basis, n, tol).len();
        let mut gens: Vec<Vector> = basis.to_vec();
        for b in basis {
            for t in 0..n {
                let e = crate::linalg::basis_vector(n, t);
                gens.push(self.product(&e, b).expect("dimension"));
                gens.push(self.product(b, &e).expect("dimension"));
            }
        }
        span_basis(&gens, n, tol).len() == base
    }

    pub fn has_nontrivial_translations(&self, tol: Tolerance) -> bool {
        !self.kernel_ideal(tol).is_empty()
    }

    /// The same algebra written in the basis `f_k = P e_k` (columns of `P`).
    pub fn change_basis(&self, p: &Matrix, tol: Tolerance) -> Result<Self, LsaError> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(LsaError::Dimension("basis change must be n x n".into()));
        }
        let pinv = p.inverse(tol)?;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let prod = self.product(&p.column(i), &p.column(j))?;
                entries.push(((i, j), pinv.mul_vec(&prod)?));
            }
        }
        Self::new(self.name.clone(), n, entries)
    }
}

impl fmt::Display for LeftSymmetricAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .nonzero_products()
            .iter()
            .map(|((i, j), v)| format!("e{}*e{}={}", i + 1, j + 1, format_vector(v)))
            .collect();
        if parts.is_empty() {
            write!(f, "{} (dim {}, zero product)", self.name, self.dim)
        } else {
            write!(f, "{} (dim {}): {}", self.name, self.dim, parts.join(", "))
        }
    }
}
