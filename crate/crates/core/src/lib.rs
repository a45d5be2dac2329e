//! Return sets of commuting linear and monomial dynamics.

pub mod arith;
pub mod error;
pub mod json;
pub mod orbit;
pub mod padic;
pub mod semigroup;
pub mod torus;

pub use error::{Error, Result};
