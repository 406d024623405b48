//! Damped Picard iteration on the Green operator.

use crate::error::{Error, Result};
use crate::exact_grid::GridFunction;
use crate::green_kernel::{green_table, GreenTable};

use super::{residual_check, Method, Problem, Solution, GREEN_SIGN};

/// Which sign multiplies `λ` in the iterated operator
/// `(T y)(t) = sign · (λ/Γ(v)) Σ_s G(t,s) h(s+v-1) f(y(s+v-1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OperatorSign {
    /// `sign = s*`: fixed points solve `-Δ^v y = λ h f(y)`.
    #[default]
    Adjudicated,
    /// `sign = +1`: the operator `F` with a plus sign.
    AsPrinted,
}

impl OperatorSign {
    pub fn value(self) -> f64 {
        match self {
            OperatorSign::Adjudicated => GREEN_SIGN,
            OperatorSign::AsPrinted => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointParams {
    pub tol: f64,
    pub max_iter: usize,
    /// Initial damping `θ ∈ (0, 1]`.
    pub damping: f64,
    pub operator: OperatorSign,
}

impl Default for FixedPointParams {
    fn default() -> Self {
        FixedPointParams {
            tol: 1e-12,
            max_iter: 1000,
            damping: 1.0,
            operator: OperatorSign::Adjudicated,
        }
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct EvalCounts {
    pub clamped: usize,
    pub extrapolated: usize,
}

/// The Green operator for one problem, with the kernel table built once.
#[derive(Debug, Clone)]
pub struct GreenOperator<'a> {
    problem: &'a Problem,
    table: GreenTable,
    sign: f64,
}

impl<'a> GreenOperator<'a> {
    pub fn new(problem: &'a Problem, sign: OperatorSign) -> Result<Self> {
        Ok(GreenOperator {
            problem,
            table: green_table(problem.shape(), None)?,
            sign: sign.value(),
        })
    }

    pub fn sign(&self) -> f64 {
        self.sign
    }

    pub fn table(&self) -> &GreenTable {
        &self.table
    }

    pub fn apply(&self, y: &GridFunction) -> Result<GridFunction> {
        self.apply_counted(y).map(|(ty, _)| ty)
    }

    pub fn apply_counted(&self, y: &GridFunction) -> Result<(GridFunction, EvalCounts)> {
        let shape = self.problem.shape();
        if y.grid() != shape.solution_grid() {
            return Err(Error::Domain(format!(
                "operator input must live on [{}, {}]",
                shape.v() - 2,
                shape.v() + shape.b() as i64
            )));
        }
        let mut counts = EvalCounts::default();
        let lambda = self.problem.lambda();
        let weights: Vec<f64> = self
            .problem
            .h_on_equation_grid()
            .iter()
            .enumerate()
            .map(|(s, h)| {
                // y(s+v-1) is point s+1 of the solution grid
                let ev = self.problem.f().evaluate(y.values()[s + 1]);
                counts.clamped += ev.clamped as usize;
                counts.extrapolated += ev.extrapolated as usize;
                self.sign * lambda * h * ev.value
            })
            .collect();
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::NonfiniteValue(format!("λ h f(y) evaluated to {w}")));
        }
        let values = self.table.weighted_sums(&weights);
        let ty = GridFunction::new(shape.v() - 2, values)
            .map_err(|e| Error::NonfiniteValue(format!("operator image: {e}")))?;
        Ok((ty, counts))
    }
}

/// `(F y)(t) = (λ/Γ(v)) Σ_s G(t,s) h(s+v-1) f(y(s+v-1))`, with a plus sign.
pub fn apply_operator_f(y: &GridFunction, problem: &Problem) -> Result<GridFunction> {
    GreenOperator::new(problem, OperatorSign::AsPrinted)?.apply(y)
}

fn sup_distance(a: &GridFunction, b: &GridFunction) -> f64 {
    a.values().iter().zip(b.values()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Iterates `y_{k+1} = (1-θ) y_k + θ T(y_k)`.
///
/// Starts from `T(0)`, or from `1` on `[v-1, v+b]` (0 at `v-2`) when `f(0) = 0`.
/// `θ` is halved after two consecutive increases of `‖y_{k+1} - y_k‖`. Converged
/// once `‖T(y_k) - y_k‖ <= tol (1 + ‖y_k‖)`.
pub fn solve_nonlinear_fixed_point(problem: &Problem, params: &FixedPointParams) -> Result<Solution> {
    if !(params.tol > 0.0) || params.max_iter == 0 || !(params.damping > 0.0 && params.damping <= 1.0) {
        return Err(Error::Domain(format!(
            "need tol > 0, max_iter >= 1 and damping in (0, 1], got {params:?}"
        )));
    }
    let shape = problem.shape();
    let op = GreenOperator::new(problem, params.operator)?;
    let zero = GridFunction::constant(shape.solution_grid(), 0.0)?;
    let (image_of_zero, mut counts) = op.apply_counted(&zero)?;

    let constant_operator = problem.lambda() == 0.0
        || problem.h_on_equation_grid().iter().all(|&h| h == 0.0)
        || problem.f().is_constant();
    let (y, iterations) = if constant_operator {
        // T does not depend on y, so T(0) is already the fixed point
        (image_of_zero, 1)
    } else {
        let mut y = if problem.f().eval(0.0) == 0.0 {
            GridFunction::from_fn(shape.solution_grid(), |t| if t == shape.v() - 2 { 0.0 } else { 1.0 })?
        } else {
            image_of_zero
        };
        let mut theta = params.damping;
        let mut prev_delta = f64::INFINITY;
        let mut increases = 0;
        let mut done = None;
        for k in 1..=params.max_iter {
            let (ty, c) = op.apply_counted(&y)?;
            counts.clamped += c.clamped;
            counts.extrapolated += c.extrapolated;
            let gap = sup_distance(&ty, &y);
            let converged = gap <= params.tol * (1.0 + y.max_abs());
            let next = GridFunction::new(
                y.base(),
                y.values().iter().zip(ty.values()).map(|(a, t)| a + theta * (t - a)).collect(),
            )?;
            let delta = theta * gap;
            y = next;
            if converged {
                done = Some(k);
                break;
            }
            if delta > prev_delta {
                increases += 1;
                if increases == 2 {
                    theta *= 0.5;
                    increases = 0;
                }
            } else {
                increases = 0;
            }
            prev_delta = delta;
        }
        match done {
            Some(k) => (y, k),
            None => {
                return Err(Error::NonConvergence {
                    iterations: params.max_iter,
                    last_delta: prev_delta,
                })
            }
        }
    };

    let residual = residual_check(&y, problem)?;
    let mut sol = Solution::assemble(y, Method::FixedPoint, residual, shape)?;
    sol.iterations = iterations;
    sol.operator_sign = Some(op.sign());
    sol.clamp_events = counts.clamped;
    sol.extrapolation_events = counts.extrapolated;
    Ok(sol)
}
