//! Affine representations `x -> rho(x) + q(x)`, the cocycle identity, the
//! evaluation map at a base point, the all-ones construction with base zero,
//! and the left-symmetric product induced by an étale affine representation.

use thiserror::Error;

use crate::linalg::{vec_add, vec_is_zero_within, vec_sub, LinalgError, Matrix, Vector};
use crate::lsa::{LeftSymmetricAlgebra, LsaError};
use crate::reps::{RepError, Representation};
use crate::scalars::{Scalar, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AffineError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("representation is not faithful (kernel of dimension {kernel_dim})")]
    NotFaithful { kernel_dim: usize },
    #[error("not étale: evaluation map has rank {rank} < {size}")]
    NotEtale { rank: usize, size: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Lsa(#[from] LsaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A basis pair `(i, j)` with residual
/// `q([e_i,e_j]) - rho(e_i) q(e_j) + rho(e_j) q(e_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleFailure {
    pub pair: (usize, usize),
    pub residual: Vector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffineRep {
    rho: Representation,
    /// `q(e_i)` for each basis vector, each of length `m`.
    q: Vec<Vector>,
    base: Vector,
}

impl AffineRep {
    pub fn new(rho: Representation, q: Vec<Vector>, base: Vector) -> Result<Self, AffineError> {
        let m = rho.dim();
        let n = rho.algebra().dim();
        if q.len() != n || q.iter().any(|v| v.len() != m) || base.len() != m {
            return Err(AffineError::Dimension(format!(
                "translation part needs {n} vectors of length {m} and a base point of length {m}"
            )));
        }
        Ok(AffineRep { rho, q, base })
    }

    pub fn rho(&self) -> &Representation {
        &self.rho
    }

    pub fn translation(&self) -> &[Vector] {
        &self.q
    }

    pub fn base(&self) -> &Vector {
        &self.base
    }

    /// `q(x)` for a coordinate vector `x`.
    pub fn q_of(&self, x: &[Scalar]) -> Vector {
        let mut acc = vec![Scalar::zero(); self.rho.dim()];
        for (c, qi) in x.iter().zip(&self.q) {
            if !c.is_zero() {
                acc = vec_add(&acc, &qi.iter().map(|s| s * c).collect::<Vector>());
            }
        }
        acc
    }

    pub fn check_cocycle(&self, tol: Tolerance) -> Vec<CocycleFailure> {
        let g = self.rho.algebra();
        let n = g.dim();
        let mut failures = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.q_of(&g.bracket_basis(i, j));
                let a = self.rho.image(i).mul_vec(&self.q[j]).expect("sizes");
                let b = self.rho.image(j).mul_vec(&self.q[i]).expect("sizes");
                let r = vec_sub(&lhs, &vec_sub(&a, &b));
                if !vec_is_zero_within(&r, tol) {
                    failures.push(CocycleFailure { pair: (i, j), residual: r });
                }
            }
        }
        failures
    }

    /// Matrix of `ev_v : x -> rho(x) v + q(x)`; column `i` is `ev_v(e_i)`.
    pub fn ev_matrix(&self) -> Matrix {
        let cols: Vec<Vector> = (0..self.q.len())
            .map(|i| {
                let rv = self.rho.image(i).mul_vec(&self.base).expect("sizes");
                vec_add(&rv, &self.q[i])
            })
            .collect();
        Matrix::from_columns(&cols).expect("equal lengths")
    }

    /// Ok when `ev_v` is a linear isomorphism.
    pub fn check_etale(&self, tol: Tolerance) -> Result<(), AffineError> {
        let ev = self.ev_matrix();
        let size = self.q.len();
        if ev.rows() != size {
            return Err(AffineError::NotEtale {
                rank: ev.rank(tol).min(size),
                size,
            });
        }
        let rank = ev.rank(tol);
        if rank < size {
            return Err(AffineError::NotEtale { rank, size });
        }
        Ok(())
    }

    pub fn is_etale(&self, tol: Tolerance) -> bool {
        self.check_etale(tol).is_ok()
    }

    /// `q(x) = rho(x) (1, ..., 1)^T` with base point zero, for a faithful
    /// `rho` into `gl(n)`. Fails when `q` is singular.
    pub fn construct_all_ones(rho: &Representation, tol: Tolerance) -> Result<Self, AffineError> {
        let n = rho.algebra().dim();
        if rho.dim() != n {
            return Err(AffineError::Dimension(format!(
                "target dimension {} differs from algebra dimension {n}",
                rho.dim()
            )));
        }
        let kernel = rho.check_faithful(tol)?;
        if !kernel.is_empty() {
            return Err(AffineError::NotFaithful {
                kernel_dim: kernel.len(),
            });
        }
        let ones = vec![Scalar::one(); n];
        let q = rho
            .images()
            .iter()
            .map(|m| m.mul_vec(&ones).expect("sizes"))
            .collect();
        let phi = AffineRep::new(rho.clone(), q, vec![Scalar::zero(); n])?;
        phi.check_etale(tol)?;
        Ok(phi)
    }

    /// `x * y = ev_v^{-1}(rho(x) ev_v(y))`.
    pub fn induced_lsa(&self, tol: Tolerance) -> Result<LeftSymmetricAlgebra, AffineError> {
        self.check_etale(tol)?;
        let ev = self.ev_matrix();
        let n = self.q.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let target = self.rho.image(i).mul_vec(&ev.column(j))?;
                entries.push(((i, j), ev.solve(&target, tol)?));
            }
        }
        Ok(LeftSymmetricAlgebra::new(self.rho.algebra().name().to_string(), n, entries)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;

    fn v(c: &[i64]) -> Vector {
        c.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(n, i - 1, j - 1)
    }

    const TOL: Tolerance = Tolerance { epsilon: 1e-9 };

    fn n3_rep() -> Representation {
        let g = LieAlgebra::new("n3", 3, vec![((0, 1), v(&[0, 0, 1]))]).unwrap();
        let r1 = Matrix::identity(3).add(&e(3, 1, 2)).unwrap().sub(&e(3, 2, 3)).unwrap();
        let r2 = e(3, 1, 2).add(&e(3, 2, 3)).unwrap();
        let r3 = e(3, 1, 3).scale(&Scalar::from_int(2));
        Representation::new(g, vec![r1, r2, r3]).unwrap()
    }

    #[test]
    fn all_ones_construction_on_n3() {
        let phi = AffineRep::construct_all_ones(&n3_rep(), TOL).unwrap();
        assert_eq!(phi.translation(), &[v(&[2, 0, 1]), v(&[1, 1, 0]), v(&[2, 0, 0])]);
        assert_eq!(phi.ev_matrix().det().unwrap(), Scalar::from_int(-2));
        assert!(phi.check_cocycle(TOL).is_empty());
        let a = phi.induced_lsa(TOL).unwrap();
        assert_eq!(
            a.product_basis(0, 0),
            &vec![Scalar::one(), Scalar::from_int(-1), Scalar::ratio(1, 2)]
        );
        assert!(a.is_left_symmetric(TOL));
        assert_eq!(a.sub_adjacent(TOL).unwrap().nonzero_brackets(), vec![((0, 1), v(&[0, 0, 1]))]);
    }

    #[test]
    fn diagonal_c2_gives_identity_translation() {
        let rho = Representation::new(LieAlgebra::abelian(2), vec![e(2, 1, 1), e(2, 2, 2)]).unwrap();
        let phi = AffineRep::construct_all_ones(&rho, TOL).unwrap();
        assert_eq!(phi.ev_matrix(), Matrix::identity(2));
        let a = phi.induced_lsa(TOL).unwrap();
        assert_eq!(a.nonzero_products(), vec![((0, 0), v(&[1, 0])), ((1, 1), v(&[0, 1]))]);
    }

    #[test]
    fn r2_products() {
        let g = LieAlgebra::new("r2", 2, vec![((0, 1), v(&[1, 0]))]).unwrap();
        let rho = Representation::new(g.clone(), vec![e(2, 1, 2), e(2, 2, 2)]).unwrap();
        let a = AffineRep::construct_all_ones(&rho, TOL).unwrap().induced_lsa(TOL).unwrap();
        assert_eq!(a.nonzero_products(), vec![((0, 1), v(&[1, 0])), ((1, 1), v(&[0, 1]))]);
        let err = AffineRep::construct_all_ones(&g.adjoint_rep(), TOL).unwrap_err();
        assert_eq!(err, AffineError::NotEtale { rank: 1, size: 2 });
    }

    #[test]
    fn cocycle_failures() {
        let rho = n3_rep();
        let zero = AffineRep::new(rho.clone(), vec![v(&[0, 0, 0]); 3], v(&[0, 0, 0])).unwrap();
        assert!(zero.check_cocycle(TOL).is_empty());
        let phi = AffineRep::construct_all_ones(&rho, TOL).unwrap();
        let mut q = phi.translation().to_vec();
        q[2] = vec_add(&q[2], &v(&[1, 0, 0]));
        let bad = AffineRep::new(rho, q, v(&[0, 0, 0])).unwrap();
        let f = bad.check_cocycle(TOL);
        // rho(e1) e1 = e1 also breaks (e1,e3); rho(e2) e1 = 0 leaves (e2,e3) intact
        let pairs: Vec<_> = f.iter().map(|x| x.pair).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2)]);
        assert_eq!(f[0].residual, v(&[1, 0, 0]));
    }

    #[test]
    fn nonzero_base_point() {
        // same LSA structure constants arise from q = 0 with base point (1,1,1)
        let rho = n3_rep();
        let phi = AffineRep::new(rho.clone(), vec![v(&[0, 0, 0]); 3], v(&[1, 1, 1])).unwrap();
        let from_base = phi.induced_lsa(TOL).unwrap();
        let from_q = AffineRep::construct_all_ones(&rho, TOL).unwrap().induced_lsa(TOL).unwrap();
        assert_eq!(from_base, from_q);
    }

    #[test]
    fn preconditions() {
        let rho = Representation::new(LieAlgebra::abelian(2), vec![e(3, 1, 1), e(3, 2, 2)]).unwrap();
        assert!(matches!(
            AffineRep::construct_all_ones(&rho, TOL),
            Err(AffineError::Dimension(_))
        ));
        let rho = Representation::new(LieAlgebra::abelian(2), vec![e(2, 1, 1), e(2, 1, 1)]).unwrap();
        assert_eq!(
            AffineRep::construct_all_ones(&rho, TOL),
            Err(AffineError::NotFaithful { kernel_dim: 1 })
        );
    }
}
