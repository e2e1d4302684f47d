//! Numerical laboratory for ground states of Henon/Hardy weighted elliptic
//! equations and systems on the unit ball.
//!
//! The crate computes radial and unconstrained minimal-energy levels of
//! weighted Rayleigh quotients, classifies exponent tuples against the
//! critical hyperbolas, evaluates Pohozaev-type boundary identities, and
//! checks the asymptotic growth of the levels in the weight exponent.

pub mod asymptotics;
pub mod error;
pub mod exponents;
pub mod grids;
pub mod scalar;
pub mod system;

pub use error::{HenonError, Result};
