//! Exact residue calculus for μ-functions on character tori of root systems.

// Index loops mirror the matrix formulas in the linear algebra code.
#![allow(clippy::needless_range_loop)]

pub mod equivariance;
pub mod error;
pub mod exact;
pub mod exec;
pub mod lattice;
pub mod linalg;
pub mod mu;
pub mod numeric;
pub mod residual;
pub mod residue;
pub mod roots;
pub mod torus;
pub mod walk;
