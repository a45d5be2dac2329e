//! Exact scalar and matrix arithmetic.

pub mod eigen;
pub mod factor;
pub mod intfactor;
pub mod intmat;
pub mod matrix;
pub mod quad;

pub use factor::{factor, mult_equation_solve, mult_relation_lattice, FactoredElement};
pub use matrix::{MatrixK, VectorK};
pub use quad::{Field, QuadElem};
