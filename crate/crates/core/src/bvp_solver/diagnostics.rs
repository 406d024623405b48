use crate::error::{Error, Result};
use crate::exact_grid::GridFunction;
use crate::frac_calc::fractional_difference;
use crate::green_kernel::BvpShape;

use super::Problem;

/// A grid function is in the cone when its margin is at least `-CONE_TOLERANCE`.
pub const CONE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// `|-Δ^v y(t) - λ h(t+v-1) f(y(t+v-1))|` for `t ∈ [0, b]`.
    pub equation_residuals: Vec<f64>,
    /// `|y(v-2)|`
    pub bc1: f64,
    /// `|Δy(v-2) - Δy(v+b-1)|`
    pub bc2: f64,
    pub max_abs: f64,
}

impl ResidualReport {
    pub fn max_equation(&self) -> f64 {
        self.equation_residuals.iter().fold(0.0, |m, &x| m.max(x))
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for (t, r) in self.equation_residuals.iter().enumerate() {
            out.push_str(&format!("residual.equation.{t}={r:e}\n"));
        }
        out.push_str(&format!(
            "residual.bc1={:e}\nresidual.bc2={:e}\nresidual.max_abs={:e}\n",
            self.bc1, self.bc2, self.max_abs
        ));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeReport {
    /// Max-norm over `[v-2, v+b]`.
    pub norm: f64,
    /// Minimum over `[v-1, v+b]`.
    pub min_interior: f64,
    pub cone_coeff: f64,
    /// `min_interior - cone_coeff · norm`
    pub margin: f64,
    pub member: bool,
}

impl ConeReport {
    pub fn to_kv(&self) -> String {
        format!(
            "cone.norm={:e}\ncone.min_interior={:e}\ncone.coeff={:e}\ncone.margin={:e}\ncone.member={}\n",
            self.norm, self.min_interior, self.cone_coeff, self.margin, self.member
        )
    }
}

fn check_solution_grid(y: &GridFunction, shape: &BvpShape) -> Result<()> {
    if y.grid() != shape.solution_grid() {
        return Err(Error::Domain(format!(
            "expected a function on base {} with {} points, got base {} with {}",
            shape.v() - 2,
            shape.b() + 3,
            y.base(),
            y.len()
        )));
    }
    Ok(())
}

/// Residuals of the difference equation and both boundary conditions.
///
/// `Δ^v y` is recomputed from its definition, independently of any solver matrix.
pub fn residual_check(y: &GridFunction, problem: &Problem) -> Result<ResidualReport> {
    residual_check_signed(y, problem, 1.0)
}

/// As [`residual_check`] against `-Δ^v y = rhs_sign · λ h f(y)`.
pub fn residual_check_signed(y: &GridFunction, problem: &Problem, rhs_sign: f64) -> Result<ResidualReport> {
    let shape = problem.shape();
    check_solution_grid(y, shape)?;
    let yv = y.values();
    let forcing: Vec<f64> = problem
        .h_on_equation_grid()
        .iter()
        .enumerate()
        .map(|(k, h)| rhs_sign * problem.lambda() * h * problem.f().eval(yv[k + 1]))
        .collect();
    forced_residual(y, shape, &forcing)
}

/// Residuals of `-Δ^v y(t) = forcing[t]`, `t ∈ [0, b]`, and the boundary conditions.
pub(crate) fn forced_residual(y: &GridFunction, shape: &BvpShape, forcing: &[f64]) -> Result<ResidualReport> {
    check_solution_grid(y, shape)?;
    let dv = fractional_difference(y, shape.v())?;
    debug_assert_eq!(dv.grid(), shape.equation_grid());
    let equation_residuals: Vec<f64> = dv.values().iter().zip(forcing).map(|(d, g)| (-d - g).abs()).collect();
    let yv = y.values();
    let n = yv.len();
    let bc1 = yv[0].abs();
    let bc2 = ((yv[1] - yv[0]) - (yv[n - 1] - yv[n - 2])).abs();
    let max_abs = equation_residuals.iter().fold(bc1.max(bc2), |m, &x| m.max(x));
    Ok(ResidualReport { equation_residuals, bc1, bc2, max_abs })
}

pub fn cone_membership(y: &GridFunction, shape: &BvpShape) -> Result<ConeReport> {
    check_solution_grid(y, shape)?;
    let cone_coeff = shape.cone_coeff()?;
    let norm = y.max_abs();
    let min_interior = y.values()[1..].iter().copied().fold(f64::INFINITY, f64::min);
    let margin = min_interior - cone_coeff * norm;
    Ok(ConeReport {
        norm,
        min_interior,
        cone_coeff,
        margin,
        member: margin >= -CONE_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvp_solver::NonlinearitySpec;
    use crate::exact_grid::Rational;

    fn shape() -> BvpShape {
        BvpShape::new("3/2".parse::<Rational>().unwrap(), 10).unwrap()
    }

    #[test]
    fn zero_function_is_in_cone() {
        let sh = shape();
        let y = GridFunction::constant(sh.solution_grid(), 0.0).unwrap();
        let c = cone_membership(&y, &sh).unwrap();
        assert!(c.member);
        assert_eq!(c.margin, 0.0);
    }

    #[test]
    fn step_function_margin() {
        let sh = shape();
        let c = 2.5;
        let y = GridFunction::from_fn(sh.solution_grid(), |t| if t == sh.v() - 2 { 0.0 } else { c }).unwrap();
        let r = cone_membership(&y, &sh).unwrap();
        let coeff = sh.cone_coeff().unwrap();
        assert!(coeff <= 1.0);
        assert!(r.member);
        assert!((r.margin - c * (1.0 - coeff)).abs() < 1e-14);
    }

    #[test]
    fn negative_interior_value_leaves_cone() {
        let sh = shape();
        let mut vals = vec![1.0; sh.b() + 3];
        vals[4] = -0.01;
        let y = GridFunction::new(sh.v() - 2, vals).unwrap();
        assert!(!cone_membership(&y, &sh).unwrap().member);
    }

    #[test]
    fn zero_function_residual_is_forcing() {
        let sh = shape();
        let h = GridFunction::from_fn(sh.interior_grid(), |t| 0.5 + t.to_f64()).unwrap();
        let p = Problem::new(sh, 0.3, h.clone(), NonlinearitySpec::Constant(2.0)).unwrap();
        let y = GridFunction::constant(sh.solution_grid(), 0.0).unwrap();
        let r = residual_check(&y, &p).unwrap();
        assert_eq!(r.equation_residuals.len(), 11);
        for (k, res) in r.equation_residuals.iter().enumerate() {
            assert!((res - 0.3 * h.values()[k] * 2.0).abs() < 1e-15);
        }
        assert_eq!(r.bc1, 0.0);
        assert_eq!(r.bc2, 0.0);
        assert_eq!(r.max_abs, r.max_equation());
    }

    #[test]
    fn wrong_grid_is_rejected() {
        let sh = shape();
        let y = GridFunction::constant(sh.interior_grid(), 0.0).unwrap();
        assert!(cone_membership(&y, &sh).is_err());
    }
}
