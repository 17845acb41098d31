//! JSON documents for algebras, representations, left-symmetric algebras
//! and affine representations. Scalars are strings in the scalar grammar
//! and basis indices are 1-based.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{AffineError, AffineRep};
use crate::catalog::Params;
use crate::liealg::{LieAlgebra, LieError};
use crate::linalg::{LinalgError, Matrix};
use crate::lsa::{LeftSymmetricAlgebra, LsaError};
use crate::reps::{RepError, Representation};
use crate::scalars::Scalar;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid document: {0}")]
    Invalid(String),
}

impl From<LieError> for DocError {
    fn from(e: LieError) -> Self {
        DocError::Invalid(e.to_string())
    }
}

impl From<RepError> for DocError {
    fn from(e: RepError) -> Self {
        DocError::Invalid(e.to_string())
    }
}

impl From<LsaError> for DocError {
    fn from(e: LsaError) -> Self {
        DocError::Invalid(e.to_string())
    }
}

impl From<LinalgError> for DocError {
    fn from(e: LinalgError) -> Self {
        DocError::Invalid(e.to_string())
    }
}

impl From<AffineError> for DocError {
    fn from(e: AffineError) -> Self {
        DocError::Invalid(e.to_string())
    }
}

/// `[e_i, e_j]` or `e_i e_j` as a coordinate vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub pair: [usize; 2],
    pub value: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
    /// Nonzero brackets with `i < j`.
    pub brackets: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDocument {
    pub algebra: AlgebraDocument,
    pub dim: usize,
    /// One row-major matrix per basis vector.
    pub images: Vec<Vec<Vec<Scalar>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LsaDocument {
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
    /// Nonzero products, all ordered pairs.
    pub products: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineDocument {
    pub representation: RepDocument,
    /// `q(e_i)` for each basis vector.
    pub translation: Vec<Vec<Scalar>>,
    pub base: Vec<Scalar>,
}

fn entries_out(items: Vec<((usize, usize), Vec<Scalar>)>) -> Vec<Entry> {
    items
        .into_iter()
        .map(|((i, j), value)| Entry {
            pair: [i + 1, j + 1],
            value,
        })
        .collect()
}

fn entries_in(entries: &[Entry], dim: usize, what: &str) -> Result<Vec<((usize, usize), Vec<Scalar>)>, DocError> {
    entries
        .iter()
        .map(|e| {
            let [i, j] = e.pair;
            if i == 0 || j == 0 || i > dim || j > dim {
                return Err(DocError::Invalid(format!(
                    "{what} index ({i},{j}) outside 1..={dim}"
                )));
            }
            if e.value.len() != dim {
                return Err(DocError::Invalid(format!(
                    "{what} ({i},{j}) has {} coordinates, expected {dim}",
                    e.value.len()
                )));
            }
            Ok(((i - 1, j - 1), e.value.clone()))
        })
        .collect()
}

impl AlgebraDocument {
    pub fn from_algebra(g: &LieAlgebra, params: &Params) -> Self {
        AlgebraDocument {
            name: g.name().to_string(),
            dim: g.dim(),
            params: params.clone(),
            brackets: entries_out(g.nonzero_brackets()),
        }
    }

    /// Builds the algebra without the Jacobi check, so that a violating
    /// document can still be reported on.
    pub fn to_algebra(&self) -> Result<LieAlgebra, DocError> {
        if self.dim == 0 {
            return Err(DocError::Invalid("dimension must be positive".into()));
        }
        let brackets = entries_in(&self.brackets, self.dim, "bracket")?;
        Ok(LieAlgebra::new_unchecked(self.name.clone(), self.dim, brackets)?)
    }
}

impl RepDocument {
    pub fn from_rep(rho: &Representation, params: &Params) -> Self {
        RepDocument {
            algebra: AlgebraDocument::from_algebra(rho.algebra(), params),
            dim: rho.dim(),
            images: rho.images().iter().map(Matrix::to_rows).collect(),
        }
    }

    pub fn to_rep(&self) -> Result<Representation, DocError> {
        let g = self.algebra.to_algebra()?;
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                    return Err(DocError::Invalid(format!(
                        "image {} is not {}x{}",
                        k + 1,
                        self.dim,
                        self.dim
                    )));
                }
                Ok(Matrix::from_rows(rows.clone())?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Representation::new(g, images)?)
    }
}

impl LsaDocument {
    pub fn from_lsa(a: &LeftSymmetricAlgebra, params: &Params) -> Self {
        LsaDocument {
            name: a.name().to_string(),
            dim: a.dim(),
            params: params.clone(),
            products: entries_out(a.nonzero_products()),
        }
    }

    pub fn to_lsa(&self) -> Result<LeftSymmetricAlgebra, DocError> {
        if self.dim == 0 {
            return Err(DocError::Invalid("dimension must be positive".into()));
        }
        let products = entries_in(&self.products, self.dim, "product")?;
        Ok(LeftSymmetricAlgebra::new(self.name.clone(), self.dim, products)?)
    }
}

impl AffineDocument {
    pub fn from_affine(phi: &AffineRep, params: &Params) -> Self {
        AffineDocument {
            representation: RepDocument::from_rep(phi.rho(), params),
            translation: phi.translation().to_vec(),
            base: phi.base().clone(),
        }
    }

    pub fn to_affine(&self) -> Result<AffineRep, DocError> {
        let rho = self.representation.to_rep()?;
        Ok(AffineRep::new(rho, self.translation.clone(), self.base.clone())?)
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, DocError> {
    Ok(serde_json::from_str(text)?)
}
