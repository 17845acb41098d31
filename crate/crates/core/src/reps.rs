//! Linear representations `g -> gl(m)`: homomorphism and faithfulness checks
//! and the extension of a faithful representation of `g` to `g + C` by the
//! identity matrix.

use thiserror::Error;

use crate::liealg::LieAlgebra;
use crate::linalg::{Matrix, Vector};
use crate::scalars::{Scalar, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("not a homomorphism: {} failing pair(s)", .0.len())]
    NotHomomorphism(Vec<HomFailure>),
    #[error("construction error: {0}")]
    Construction(String),
}

/// A basis pair `(i, j)` (0-based, `i < j`) with residual
/// `[rho(e_i), rho(e_j)] - rho([e_i, e_j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomFailure {
    pub pair: (usize, usize),
    pub residual: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    algebra: LieAlgebra,
    dim: usize,
    images: Vec<Matrix>,
}

impl Representation {
    pub fn new(algebra: LieAlgebra, images: Vec<Matrix>) -> Result<Self, RepError> {
        if images.len() != algebra.dim() {
            return Err(RepError::Dimension(format!(
                "{} images for an algebra of dimension {}",
                images.len(),
                algebra.dim()
            )));
        }
        let dim = images.first().map(Matrix::rows).unwrap_or(0);
        if dim == 0 || images.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(RepError::Dimension("images must be square matrices of one common size".into()));
        }
        Ok(Representation { algebra, dim, images })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// Target dimension `m`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[Matrix] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Matrix {
        &self.images[i]
    }

    pub fn is_exact(&self) -> bool {
        self.images.iter().all(Matrix::is_exact) && self.algebra.is_exact()
    }

    /// `rho(x)` for a coordinate vector `x`.
    pub fn apply(&self, x: &[Scalar]) -> Result<Matrix, RepError> {
        if x.len() != self.images.len() {
            return Err(RepError::Dimension(format!(
                "vector of length {} for an algebra of dimension {}",
                x.len(),
                self.images.len()
            )));
        }
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for (c, m) in x.iter().zip(&self.images) {
            if !c.is_zero() {
                acc = acc.add(&m.scale(c)).expect("same size");
            }
        }
        Ok(acc)
    }

    fn residual(&self, i: usize, j: usize) -> Matrix {
        let lhs = self.images[i].commutator(&self.images[j]).expect("square");
        let rhs = self.apply(&self.algebra.bracket_basis(i, j)).expect("algebra dimension");
        lhs.sub(&rhs).expect("same size")
    }

    /// Largest Frobenius norm of a bracket residual over all pairs.
    pub fn max_residual(&self) -> f64 {
        let n = self.images.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max(self.residual(i, j).frobenius_norm());
            }
        }
        worst
    }

    /// Pairs whose residual is nonzero: exactly, or in approximate mode when
    /// its Frobenius norm exceeds `eps * (1 + max entry magnitude)`.
    pub fn check_homomorphism(&self, tol: Tolerance) -> Vec<HomFailure> {
        let n = self.images.len();
        let scale = 1.0 + self.images.iter().map(Matrix::max_abs).fold(0.0, f64::max);
        let mut failures = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let r = self.residual(i, j);
                let bad = if r.is_exact() {
                    !r.is_zero()
                } else {
                    r.frobenius_norm() > tol.epsilon * scale
                };
                if bad {
                    failures.push(HomFailure { pair: (i, j), residual: r });
                }
            }
        }
        failures
    }

    /// The `m^2 x n` matrix whose column `i` is `rho(e_i)` flattened.
    pub fn stacked(&self) -> Matrix {
        let cols: Vec<Vector> = self.images.iter().map(Matrix::flatten).collect();
        Matrix::from_columns(&cols).expect("equal lengths")
    }

    /// Kernel of `rho` (empty iff faithful). Requires a homomorphism.
    pub fn check_faithful(&self, tol: Tolerance) -> Result<Vec<Vector>, RepError> {
        let failures = self.check_homomorphism(tol);
        if !failures.is_empty() {
            return Err(RepError::NotHomomorphism(failures));
        }
        Ok(self.kernel(tol))
    }

    /// Kernel of the linear map `x -> rho(x)`, without the homomorphism check.
    pub fn kernel(&self, tol: Tolerance) -> Vec<Vector> {
        self.stacked().nullspace(tol)
    }

    pub fn is_faithful(&self, tol: Tolerance) -> bool {
        matches!(self.check_faithful(tol), Ok(k) if k.is_empty())
    }

    /// Representation of `g + C` sending the new basis vector to `I_m`.
    pub fn extend_with_identity(&self, tol: Tolerance) -> Result<Representation, RepError> {
        let kernel = self.check_faithful(tol)?;
        if !kernel.is_empty() {
            return Err(RepError::Construction(format!(
                "input representation has a {}-dimensional kernel",
                kernel.len()
            )));
        }
        let id = Matrix::identity(self.dim);
        let mut cols: Vec<Vector> = self.images.iter().map(Matrix::flatten).collect();
        cols.push(id.flatten());
        if Matrix::from_columns(&cols).expect("equal lengths").rank(tol) <= self.images.len() {
            return Err(RepError::Construction(format!(
                "I_{} already lies in the span of the image",
                self.dim
            )));
        }
        let algebra = self.algebra.direct_sum(&LieAlgebra::abelian(1)).with_name(format!("{}+C", self.algebra.name()));
        let mut images = self.images.clone();
        images.push(id);
        Representation::new(algebra, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> Vector {
        c.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(n, i - 1, j - 1)
    }

    fn n3() -> LieAlgebra {
        LieAlgebra::new("n3", 3, vec![((0, 1), v(&[0, 0, 1]))]).unwrap()
    }

    fn n3_rep() -> Representation {
        let r1 = Matrix::identity(3).add(&e(3, 1, 2)).unwrap().sub(&e(3, 2, 3)).unwrap();
        let r2 = e(3, 1, 2).add(&e(3, 2, 3)).unwrap();
        let r3 = e(3, 1, 3).scale(&Scalar::from_int(2));
        Representation::new(n3(), vec![r1, r2, r3]).unwrap()
    }

    const TOL: Tolerance = Tolerance { epsilon: 1e-9 };

    #[test]
    fn n3_table_rep_is_faithful_homomorphism() {
        let rho = n3_rep();
        assert!(rho.check_homomorphism(TOL).is_empty());
        assert!(rho.check_faithful(TOL).unwrap().is_empty());
    }

    #[test]
    fn zero_map_on_abelian() {
        let g = LieAlgebra::abelian(3);
        let rho = Representation::new(g, vec![Matrix::zeros(2, 2); 3]).unwrap();
        assert!(rho.check_homomorphism(TOL).is_empty());
        assert_eq!(rho.check_faithful(TOL).unwrap().len(), 3);
    }

    #[test]
    fn wrong_image_reports_residual() {
        let good = n3_rep();
        let mut images = good.images().to_vec();
        images[2] = e(3, 1, 3);
        let bad = Representation::new(n3(), images).unwrap();
        let f = bad.check_homomorphism(TOL);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].pair, (0, 1));
        assert_eq!(f[0].residual, e(3, 1, 3));
        assert!(matches!(bad.check_faithful(TOL), Err(RepError::NotHomomorphism(_))));
    }

    #[test]
    fn sl2_fundamental_is_faithful() {
        let sl2 = LieAlgebra::new(
            "sl2",
            3,
            vec![((0, 1), v(&[0, 0, 1])), ((0, 2), v(&[-2, 0, 0])), ((1, 2), v(&[0, 2, 0]))],
        )
        .unwrap();
        let h = e(2, 1, 1).sub(&e(2, 2, 2)).unwrap();
        let rho = Representation::new(sl2, vec![e(2, 1, 2), e(2, 2, 1), h]).unwrap();
        assert!(rho.is_faithful(TOL));
    }

    #[test]
    fn adjoint_kernel_is_center() {
        let ad = n3().adjoint_rep();
        assert!(ad.check_homomorphism(TOL).is_empty());
        assert_eq!(ad.check_faithful(TOL).unwrap(), vec![v(&[0, 0, 1])]);
        assert!(LieAlgebra::abelian(2).adjoint_rep().images().iter().all(Matrix::is_zero));
    }

    #[test]
    fn extension_examples() {
        let r2 = LieAlgebra::new("r2", 2, vec![((0, 1), v(&[1, 0]))]).unwrap();
        let rho = Representation::new(r2, vec![e(2, 1, 2), e(2, 2, 2)]).unwrap();
        let ext = rho.extend_with_identity(TOL).unwrap();
        assert_eq!(ext.algebra().dim(), 3);
        assert_eq!(ext.image(2), &Matrix::identity(2));
        assert!(ext.is_faithful(TOL));

        let rho = Representation::new(n3(), vec![e(3, 1, 2), e(3, 2, 3), e(3, 1, 3)]).unwrap();
        let ext = rho.extend_with_identity(TOL).unwrap();
        assert_eq!(ext.dim(), 3);
        assert!(ext.is_faithful(TOL));

        let c = Representation::new(LieAlgebra::abelian(1), vec![Matrix::identity(1)]).unwrap();
        assert!(matches!(c.extend_with_identity(TOL), Err(RepError::Construction(_))));
    }

    #[test]
    fn approx_mode_agrees() {
        let rho = n3_rep();
        let approx = Representation::new(n3(), rho.images().iter().map(Matrix::to_approx).collect()).unwrap();
        assert!(!approx.is_exact());
        assert!(approx.is_faithful(TOL));
    }
}
