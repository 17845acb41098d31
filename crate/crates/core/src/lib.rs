//! Exact and numeric tools for low-dimensional complex Lie algebras: faithful
//! representations, minimal representation dimension certificates, étale
//! affine representations and their left-symmetric algebras.

pub mod affine;
pub mod catalog;
pub mod doc;
pub mod liealg;
pub mod linalg;
pub mod lsa;
pub mod mu;
pub mod pipeline;
pub mod reps;
pub mod scalars;
