//! Sparse multivariate polynomials over the integers.

mod matrix;
mod monomial;
mod polynomial;
mod render;
mod var;

pub use matrix::{PolyMatrix, DEFAULT_DET_LIMIT};
pub use monomial::Monomial;
pub use polynomial::{AffinePoint, GradedDegree, Polynomial, RationalPoly, Substitution};
pub use render::poly;
pub use var::{CycVar, VarId};
