//! Discrete fractional calculus on `N_a` grids and the two-point boundary
//! value problem
//!
//! ```text
//! -Δ^v y(t) = λ h(t+v-1) f(y(t+v-1)),   t ∈ [0, b],
//! y(v-2) = 0,   Δy(v-2) = Δy(v+b-1),     1 < v < 2.
//! ```
//!
//! The crate builds the Green's function of the linear problem, solves the
//! linear problem two independent ways, iterates the nonlinear problem to a
//! fixed point, and checks the discrete identities the construction rests on.

pub mod bvp_solver;
pub mod cli;
pub mod config;
pub mod error;
pub mod exact_grid;
pub mod frac_calc;
pub mod green_kernel;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use exact_grid::{falling_factorial, gamma, signed_log_gamma, Grid, GridFunction, Rational, SignedLogGamma};
pub use green_kernel::{BvpShape, GreenTable};
