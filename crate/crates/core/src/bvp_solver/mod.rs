//! Linear and nonlinear solvers for the boundary value problem, with the
//! residual, cone, limit and `λ`-interval diagnostics.

mod diagnostics;
mod fixed_point;
mod intervals;
mod limits;
mod linear;
mod nonlinearity;

use std::fmt;

pub use diagnostics::{cone_membership, residual_check, residual_check_signed, ConeReport, ResidualReport, CONE_TOLERANCE};
pub use fixed_point::{apply_operator_f, solve_nonlinear_fixed_point, FixedPointParams, GreenOperator, OperatorSign};
pub use intervals::{lambda_intervals, LambdaIntervals};
pub use limits::{estimate_limit_ratio, LimitClass, LimitEstimate, LimitPoint};
pub use linear::{adjudicate_green_sign, green_sums, solve_linear_direct, solve_linear_green, DirectSystem};
pub use nonlinearity::{Evaluation, NonlinearitySpec, CLAMP_FLOOR};

use crate::error::{Error, Result};
use crate::exact_grid::GridFunction;
use crate::green_kernel::BvpShape;

/// Global sign `s*` of the Green representation: the solution of the linear
/// problem with forcing `g` is `s* · (1/Γ(v)) Σ_s G(t,s) g(s)`.
///
/// Fixed by comparison against the direct linear solve; see
/// [`adjudicate_green_sign`] and the oracle-equivalence tests.
pub const GREEN_SIGN: f64 = -1.0;

/// A full instance: shape, `λ`, weight `h` on `[v-1, v+b]`, and the nonlinearity `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    shape: BvpShape,
    lambda: f64,
    h: GridFunction,
    f: NonlinearitySpec,
}

impl Problem {
    pub fn new(shape: BvpShape, lambda: f64, h: GridFunction, f: NonlinearitySpec) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::Domain(format!("lambda must be finite and nonnegative, got {lambda}")));
        }
        shape.check_h(&h)?;
        if let Some(x) = h.values().iter().find(|&&x| x < 0.0) {
            return Err(Error::Domain(format!("h must be nonnegative, found {x}")));
        }
        Ok(Problem { shape, lambda, h, f })
    }

    pub fn shape(&self) -> &BvpShape {
        &self.shape
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn h(&self) -> &GridFunction {
        &self.h
    }

    pub fn f(&self) -> &NonlinearitySpec {
        &self.f
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Problem::new(self.shape, lambda, self.h.clone(), self.f.clone())
    }

    /// `h(t+v-1)` for `t ∈ [0, b]`.
    pub fn h_on_equation_grid(&self) -> &[f64] {
        &self.h.values()[..=self.shape.b()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Green,
    Direct,
    FixedPoint,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Green => "green",
            Method::Direct => "direct",
            Method::FixedPoint => "fixed_point",
        })
    }
}

/// A grid function on `[v-2, v+b]` with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub y: GridFunction,
    pub method: Method,
    pub residual: ResidualReport,
    pub cone: ConeReport,
    pub iterations: usize,
    /// `s*` used by the Green representation.
    pub green_sign: f64,
    /// Sign in front of `λ` in the iterated operator (fixed-point solves only).
    pub operator_sign: Option<f64>,
    pub clamp_events: usize,
    pub extrapolation_events: usize,
}

impl Solution {
    pub(crate) fn assemble(y: GridFunction, method: Method, residual: ResidualReport, shape: &BvpShape) -> Result<Self> {
        let cone = cone_membership(&y, shape)?;
        Ok(Solution {
            y,
            method,
            residual,
            cone,
            iterations: 0,
            green_sign: GREEN_SIGN,
            operator_sign: None,
            clamp_events: 0,
            extrapolation_events: 0,
        })
    }

    /// CSV with header `t,y`; `t` exact, `y` to 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,y\n");
        for (t, y) in self.y.iter() {
            out.push_str(&format!("{t},{}\n", crate::green_kernel::format_sig17(y)));
        }
        out
    }

    /// Flat `key=value` summary of the solve and both reports.
    pub fn report(&self) -> String {
        let mut out = format!("method={}\niterations={}\ngreen_sign={}\n", self.method, self.iterations, self.green_sign);
        if let Some(s) = self.operator_sign {
            out.push_str(&format!("operator_sign={s}\n"));
        }
        out.push_str(&format!(
            "clamp_events={}\nextrapolation_events={}\n",
            self.clamp_events, self.extrapolation_events
        ));
        out.push_str(&self.residual.to_kv());
        out.push_str(&self.cone.to_kv());
        out
    }
}
