//! Exact grid coordinates, Gamma with sign tracking, and the falling factorial.

mod falling;
mod gamma;
mod grid;
mod rational;

pub use falling::falling_factorial;
pub use gamma::{gamma, signed_log_gamma, SignedLogGamma, POLE_TOLERANCE};
pub use grid::{Grid, GridFunction};
pub use rational::Rational;

/// Exact pole test for the Gamma function.
pub fn is_nonpositive_integer(q: Rational) -> bool {
    q.is_nonpositive_integer()
}
