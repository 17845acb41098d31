//! Lie algebras given by structure constants, and the invariants used by the
//! lower-bound rules: center, derived and lower central series, nilpotency
//! class, filiform and 2-step tests, direct sums, derivations.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{basis_vector, span_basis, vec_add, vec_is_zero_within, vec_scale, LinalgError, Matrix, Vector};
use crate::reps::Representation;
use crate::scalars::{Scalar, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("Jacobi identity fails for {name} on {} triple(s), first {:?}", failures.len(), failures.first().map(|f| f.triple))]
    Jacobi { name: String, failures: Vec<JacobiFailure> },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A basis triple `(i, j, k)` (0-based, `i < j < k`) on which the Jacobi sum
/// is nonzero, with the residual vector.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiFailure {
    pub triple: (usize, usize, usize),
    pub residual: Vector,
}

/// Bracket entry `[e_i, e_j] = coeffs` with 0-based indices.
pub type BracketEntry = ((usize, usize), Vector);

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    /// `[e_i, e_j]` for `i < j`, indexed by [`pair_index`].
    consts: Vec<Vector>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // rows 0..i contribute (n-1) + (n-2) + ... + (n-i)
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl LieAlgebra {
    /// Builds the algebra and verifies the Jacobi identity at the default
    /// tolerance.
    pub fn new(name: impl Into<String>, dim: usize, brackets: Vec<BracketEntry>) -> Result<Self, LieError> {
        let g = Self::new_unchecked(name, dim, brackets)?;
        let failures = g.jacobi_check(Tolerance::default());
        if failures.is_empty() {
            Ok(g)
        } else {
            Err(LieError::Jacobi {
                name: g.name,
                failures,
            })
        }
    }

    /// Builds the algebra without the Jacobi check, so that misprinted data
    /// can still be loaded and audited.
    pub fn new_unchecked(name: impl Into<String>, dim: usize, brackets: Vec<BracketEntry>) -> Result<Self, LieError> {
        if dim == 0 {
            return Err(LieError::Dimension("dimension must be positive".into()));
        }
        let npairs = dim * (dim - 1) / 2;
        let mut consts = vec![vec![Scalar::zero(); dim]; npairs];
        for ((i, j), coeffs) in brackets {
            if i >= dim || j >= dim || coeffs.len() != dim {
                return Err(LieError::Dimension(format!(
                    "bracket [e{},e{}] with {} coefficients in dimension {dim}",
                    i + 1,
                    j + 1,
                    coeffs.len()
                )));
            }
            if i == j {
                if coeffs.iter().any(|c| !c.is_zero()) {
                    return Err(LieError::Dimension(format!("[e{0},e{0}] must vanish", i + 1)));
                }
                continue;
            }
            let (a, b, v) = if i < j {
                (i, j, coeffs)
            } else {
                (j, i, coeffs.iter().map(|c| -c).collect())
            };
            let slot = &mut consts[pair_index(dim, a, b)];
            *slot = vec_add(slot, &v);
        }
        Ok(LieAlgebra {
            name: name.into(),
            dim,
            consts,
        })
    }

    pub fn abelian(dim: usize) -> Self {
        let name = if dim == 1 { "C".to_string() } else { format!("C{dim}") };
        Self::new_unchecked(name, dim, Vec::new()).expect("valid abelian algebra")
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
        self.consts.iter().flatten().all(Scalar::is_exact)
    }

    /// `[e_i, e_j]` for arbitrary 0-based `i, j`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => vec![Scalar::zero(); self.dim],
            std::cmp::Ordering::Less => self.consts[pair_index(self.dim, i, j)].clone(),
            std::cmp::Ordering::Greater => self.consts[pair_index(self.dim, j, i)].iter().map(|c| -c).collect(),
        }
    }

    /// Nonzero brackets `[e_i, e_j]` with `i < j`.
    pub fn nonzero_brackets(&self) -> Vec<BracketEntry> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = &self.consts[pair_index(self.dim, i, j)];
                if v.iter().any(|c| !c.is_zero()) {
                    out.push(((i, j), v.clone()));
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector, LieError> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(LieError::Dimension(format!(
                "bracket of vectors of length {} and {} in dimension {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        let mut acc = vec![Scalar::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let b = self.bracket_basis(i, j);
                acc = vec_add(&acc, &vec_scale(&b, &(&x[i] * &y[j])));
            }
        }
        Ok(acc)
    }

    fn bracket_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        self.bracket(x, y).expect("vectors of algebra dimension")
    }

    /// Triples `i < j < k` where the Jacobi sum is nonzero (beyond `tol` for
    /// approximate constants).
    pub fn jacobi_check(&self, tol: Tolerance) -> Vec<JacobiFailure> {
        let n = self.dim;
        let e = |i| basis_vector(n, i);
        let mut failures = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let t1 = self.bracket_unchecked(&e(i), &self.bracket_basis(j, k));
                    let t2 = self.bracket_unchecked(&e(j), &self.bracket_basis(k, i));
                    let t3 = self.bracket_unchecked(&e(k), &self.bracket_basis(i, j));
                    let r = vec_add(&vec_add(&t1, &t2), &t3);
                    if !vec_is_zero_within(&r, tol) {
                        failures.push(JacobiFailure {
                            triple: (i, j, k),
                            residual: r,
                        });
                    }
                }
            }
        }
        failures
    }

    /// Matrix of `ad(e_i)`: column `j` holds `[e_i, e_j]`.
    pub fn ad_matrix(&self, i: usize) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.bracket_basis(i, j)).collect();
        Matrix::from_columns(&cols).expect("square ad matrix")
    }

    pub fn adjoint_rep(&self) -> Representation {
        let images = (0..self.dim).map(|i| self.ad_matrix(i)).collect();
        Representation::new(self.clone(), images).expect("adjoint matrices have algebra dimension")
    }

    /// Basis of the center, as the kernel of `x -> ([x,e_1], ..., [x,e_n])`.
    pub fn center(&self, tol: Tolerance) -> Vec<Vector> {
        let n = self.dim;
        let cols: Vec<Vector> = (0..n)
            .map(|i| (0..n).flat_map(|j| self.bracket_basis(i, j)).collect())
            .collect();
        Matrix::from_columns(&cols).expect("stacked adjoint").nullspace(tol)
    }

    pub fn center_dim(&self, tol: Tolerance) -> usize {
        self.center(tol).len()
    }

    fn bracket_spaces(&self, a: &[Vector], b: &[Vector], tol: Tolerance) -> Vec<Vector> {
        let mut gens = Vec::new();
        for x in a {
            for y in b {
                let v = self.bracket_unchecked(x, y);
                if !vec_is_zero_within(&v, tol) {
                    gens.push(v);
                }
            }
        }
        span_basis(&gens, self.dim, tol)
    }

    fn full_space(&self) -> Vec<Vector> {
        (0..self.dim).map(|i| basis_vector(self.dim, i)).collect()
    }

    /// Basis of `[g, g]`.
    pub fn derived_algebra(&self, tol: Tolerance) -> Vec<Vector> {
        let full = self.full_space();
        self.bracket_spaces(&full, &full, tol)
    }

    /// Dimensions of `g, [g,g], [[g,g],[g,g]], ...` until the dimension
    /// stops changing (the stable term is listed once).
    pub fn derived_series_dims(&self, tol: Tolerance) -> Vec<usize> {
        let mut cur = self.full_space();
        let mut dims = vec![cur.len()];
        loop {
            let next = self.bracket_spaces(&cur, &cur, tol);
            if next.len() == cur.len() {
                return dims;
            }
            dims.push(next.len());
            if next.is_empty() {
                return dims;
            }
            cur = next;
        }
    }

    /// Dimensions of `g^1 = g, g^2 = [g,g], g^{i+1} = [g, g^i], ...` until
    /// the dimension stops changing.
    pub fn lower_central_series_dims(&self, tol: Tolerance) -> Vec<usize> {
        let full = self.full_space();
        let mut cur = full.clone();
        let mut dims = vec![cur.len()];
        loop {
            let next = self.bracket_spaces(&full, &cur, tol);
            if next.len() == cur.len() {
                return dims;
            }
            dims.push(next.len());
            if next.is_empty() {
                return dims;
            }
            cur = next;
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.consts.iter().flatten().all(Scalar::is_zero)
    }

    pub fn is_solvable(&self, tol: Tolerance) -> bool {
        self.derived_series_dims(tol).last() == Some(&0)
    }

    pub fn is_nilpotent(&self, tol: Tolerance) -> bool {
        self.lower_central_series_dims(tol).last() == Some(&0)
    }

    /// Class `k` with `g^k != 0` and `g^{k+1} = 0`; `None` if not nilpotent.
    pub fn nilpotency_class(&self, tol: Tolerance) -> Option<usize> {
        let dims = self.lower_central_series_dims(tol);
        (dims.last() == Some(&0)).then(|| dims.iter().filter(|&&d| d > 0).count())
    }

    /// `[g,g]` is abelian.
    pub fn is_2solvable(&self, tol: Tolerance) -> bool {
        let d = self.derived_algebra(tol);
        self.bracket_spaces(&d, &d, tol).is_empty()
    }

    /// Nilpotent of class `n - 1` (for `n >= 2`).
    pub fn is_filiform(&self, tol: Tolerance) -> bool {
        self.dim >= 2 && self.nilpotency_class(tol) == Some(self.dim - 1)
    }

    pub fn is_2step_with_1dim_center(&self, tol: Tolerance) -> bool {
        self.nilpotency_class(tol) == Some(2) && self.center_dim(tol) == 1
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let n = self.dim + other.dim;
        let pad = |v: &Vector, offset: usize| {
            let mut out = vec![Scalar::zero(); n];
            for (k, c) in v.iter().enumerate() {
                out[offset + k] = c.clone();
            }
            out
        };
        let mut brackets = Vec::new();
        for ((i, j), v) in self.nonzero_brackets() {
            brackets.push(((i, j), pad(&v, 0)));
        }
        for ((i, j), v) in other.nonzero_brackets() {
            brackets.push(((i + self.dim, j + self.dim), pad(&v, self.dim)));
        }
        let name = format!("{}+{}", self.name, other.name);
        LieAlgebra::new_unchecked(name, n, brackets).expect("block structure constants")
    }

    /// Basis of `Der(g)`, as matrices `D` with column `l` equal to `D e_l`.
    pub fn derivations(&self, tol: Tolerance) -> Vec<Matrix> {
        let n = self.dim;
        let var = |k: usize, l: usize| k * n + l;
        let mut rows: Vec<Vector> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let cij = self.bracket_basis(i, j);
                for k in 0..n {
                    let mut row = vec![Scalar::zero(); n * n];
                    // D[e_i,e_j]
                    for (l, c) in cij.iter().enumerate() {
                        row[var(k, l)] += c;
                    }
                    // -[D e_i, e_j] - [e_i, D e_j]
                    for p in 0..n {
                        let cpj = &self.bracket_basis(p, j)[k];
                        row[var(p, i)] -= cpj;
                        let cip = &self.bracket_basis(i, p)[k];
                        row[var(p, j)] -= cip;
                    }
                    rows.push(row);
                }
            }
        }
        let basis = if rows.is_empty() {
            (0..n * n).map(|v| basis_vector(n * n, v)).collect()
        } else {
            Matrix::from_rows(rows).expect("derivation system").nullspace(tol)
        };
        basis
            .into_iter()
            .map(|v| Matrix::new(n, n, v).expect("n x n derivation"))
            .collect()
    }

    /// Whether a random combination of basis derivations is invertible, over
    /// 8 seeded attempts.
    pub fn has_invertible_derivation(&self, seed: u64, tol: Tolerance) -> bool {
        let basis = self.derivations(tol);
        if basis.is_empty() {
            return false;
        }
        let n = self.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..8).any(|_| {
            let mut d = Matrix::zeros(n, n);
            for b in &basis {
                let c = Scalar::from_int(rng.gen_range(-50..=50));
                d = d.add(&b.scale(&c)).expect("same size");
            }
            let det = d.det().expect("square");
            if det.is_exact() {
                !det.is_zero()
            } else {
                det.abs() > tol.epsilon * d.max_abs().max(1.0).powi(n as i32)
            }
        })
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .nonzero_brackets()
            .iter()
            .map(|((i, j), v)| format!("[e{},e{}]={}", i + 1, j + 1, format_vector(v)))
            .collect();
        if parts.is_empty() {
            write!(f, "{} (dim {}, abelian)", self.name, self.dim)
        } else {
            write!(f, "{} (dim {}): {}", self.name, self.dim, parts.join(", "))
        }
    }
}

/// Renders `sum c_k e_k` such as `e1-e2+1/2*e3`.
pub fn format_vector(v: &[Scalar]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let term = if cs == "1" {
            format!("e{}", k + 1)
        } else if cs == "-1" {
            format!("-e{}", k + 1)
        } else if cs.contains(['+', 'i']) || cs[1..].contains('-') {
            format!("({cs})*e{}", k + 1)
        } else {
            format!("{cs}*e{}", k + 1)
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}
