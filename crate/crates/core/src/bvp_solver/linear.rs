//! The linear problem `-Δ^v y(t) = λ g(t)`, solved two independent ways:
//! by the Green representation, and by assembling `Δ^v` as a matrix acting
//! on the unknowns `y(v-2), ..., y(v+b)` and eliminating directly.

use crate::error::{Error, Result};
use crate::exact_grid::{GridFunction, Rational};
use crate::green_kernel::{green_table, BvpShape};

use super::diagnostics::forced_residual;
use super::{Method, NonlinearitySpec, Problem, Solution, GREEN_SIGN};

/// Pivots smaller than this in magnitude mark the system as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// The `(b+3) × (b+3)` system for the unknowns `y(v-2+j)`, `j = 0..=b+2`.
///
/// Row 0 is `y(v-2) = 0`, rows `1..=b+1` are the difference equation at
/// `t = 0..=b`, and the last row is `Δy(v-2) - Δy(v+b-1) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSystem {
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl DirectSystem {
    pub fn assemble(shape: &BvpShape, forcing: &[f64]) -> Result<Self> {
        let b = shape.b();
        let n = b + 3;
        if forcing.len() != b + 1 {
            return Err(Error::Domain(format!("need {} forcing values, got {}", b + 1, forcing.len())));
        }
        // Inner sum of order mu = 2 - v on base v-2 lands on base 0:
        //   S(k) = Σ_{j<=k} w(k-j) y_j,   w(m) = (m+mu-1)^(mu-1) / Γ(mu) = Π_{i=1}^{m} (mu-1+i)/i
        let mu = (Rational::from(2i64) - shape.v()).to_f64();
        let mut w = vec![1.0; n];
        for m in 1..n {
            w[m] = w[m - 1] * (mu - 1.0 + m as f64) / m as f64;
        }
        let weight = |k: usize, j: usize| if j <= k { w[k - j] } else { 0.0 };

        let mut matrix = vec![vec![0.0; n]; n];
        let mut rhs = vec![0.0; n];
        matrix[0][0] = 1.0;
        for k in 0..=b {
            // -Δ² S(k) = -(S(k+2) - 2 S(k+1) + S(k))
            let row = &mut matrix[k + 1];
            for (j, a) in row.iter_mut().enumerate() {
                *a = -(weight(k + 2, j) - 2.0 * weight(k + 1, j) + weight(k, j));
            }
            rhs[k + 1] = forcing[k];
        }
        let last = &mut matrix[n - 1];
        last[1] += 1.0;
        last[0] -= 1.0;
        last[n - 1] -= 1.0;
        last[n - 2] += 1.0;
        Ok(DirectSystem { matrix, rhs })
    }

    /// Gaussian elimination with partial pivoting.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let mut a = self.matrix.clone();
        let mut x = self.rhs.clone();
        let n = x.len();
        for col in 0..n {
            let (p, pivot) = (col..n)
                .map(|r| (r, a[r][col]))
                .max_by(|u, v| u.1.abs().total_cmp(&v.1.abs()))
                .expect("non-empty column");
            if pivot.abs() < PIVOT_TOLERANCE {
                return Err(Error::SingularSystem { column: col, pivot });
            }
            a.swap(col, p);
            x.swap(col, p);
            for r in col + 1..n {
                let factor = a[r][col] / a[col][col];
                if factor != 0.0 {
                    for c in col..n {
                        a[r][c] -= factor * a[col][c];
                    }
                    x[r] -= factor * x[col];
                }
            }
        }
        for r in (0..n).rev() {
            let tail: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
            x[r] = (x[r] - tail) / a[r][r];
        }
        Ok(x)
    }
}

fn forcing_from(shape: &BvpShape, lambda: f64, rhs: &GridFunction) -> Result<Vec<f64>> {
    if rhs.base() != shape.v() - 1 || rhs.len() < shape.b() + 1 {
        return Err(Error::Domain(format!(
            "rhs must be sampled on [{}, {}], got base {} with {} points",
            shape.v() - 1,
            shape.v() + shape.b() as i64 - 1,
            rhs.base(),
            rhs.len()
        )));
    }
    Ok(rhs.values()[..=shape.b()].iter().map(|g| lambda * g).collect())
}

/// Solves `-Δ^v y(t) = λ rhs(t+v-1)` with the boundary conditions by direct elimination.
///
/// `rhs` is sampled on `[v-1, v+b]` (the last point is unused) and may have any sign.
pub fn solve_linear_direct(shape: &BvpShape, lambda: f64, rhs: &GridFunction) -> Result<Solution> {
    let forcing = forcing_from(shape, lambda, rhs)?;
    let y = DirectSystem::assemble(shape, &forcing)?.solve()?;
    let y = GridFunction::new(shape.v() - 2, y)?;
    let residual = forced_residual(&y, shape, &forcing)?;
    Solution::assemble(y, Method::Direct, residual, shape)
}

/// `(λ/Γ(v)) Σ_s G(t,s) rhs(s+v-1)` on `[v-2, v+b]`, without the sign `s*`.
pub fn green_sums(shape: &BvpShape, lambda: f64, rhs: &GridFunction) -> Result<Vec<f64>> {
    let forcing = forcing_from(shape, lambda, rhs)?;
    Ok(green_table(shape, None)?.weighted_sums(&forcing))
}

/// Green representation of the linear problem with constant nonlinearity `f ≡ c`:
/// `y(t) = s* (λ c / Γ(v)) Σ_s G(t,s) h(s+v-1)`.
pub fn solve_linear_green(problem: &Problem) -> Result<Solution> {
    let NonlinearitySpec::Constant(c) = *problem.f() else {
        return Err(Error::Domain(format!(
            "the Green representation solves the linear problem only; f is {}",
            problem.f()
        )));
    };
    let shape = problem.shape();
    let sums = green_sums(shape, problem.lambda() * c, problem.h())?;
    let y = GridFunction::new(shape.v() - 2, sums.iter().map(|x| GREEN_SIGN * x).collect())?;
    let forcing: Vec<f64> = problem.h_on_equation_grid().iter().map(|h| problem.lambda() * c * h).collect();
    let residual = forced_residual(&y, shape, &forcing)?;
    Solution::assemble(y, Method::Green, residual, shape)
}

/// The sign `s ∈ {+1, -1}` minimizing `max_t |s · green_sums - y_direct|`, and that discrepancy.
pub fn adjudicate_green_sign(shape: &BvpShape, rhs: &GridFunction) -> Result<(f64, f64)> {
    let direct = solve_linear_direct(shape, 1.0, rhs)?;
    let sums = green_sums(shape, 1.0, rhs)?;
    let gap = |s: f64| {
        sums.iter()
            .zip(direct.y.values())
            .fold(0.0f64, |m, (g, d)| m.max((s * g - d).abs()))
    };
    let (plus, minus) = (gap(1.0), gap(-1.0));
    Ok(if plus <= minus { (1.0, plus) } else { (-1.0, minus) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn shape(v: &str, b: usize) -> BvpShape {
        BvpShape::new(q(v), b).unwrap()
    }

    #[test]
    fn homogeneous_problem_has_zero_solution() {
        let sh = shape("3/2", 6);
        let zero = GridFunction::constant(sh.interior_grid(), 0.0).unwrap();
        let sol = solve_linear_direct(&sh, 1.0, &zero).unwrap();
        assert!(sol.y.values().iter().all(|&y| y == 0.0));
    }

    #[test]
    fn small_direct_solve() {
        let sh = shape("3/2", 1);
        let ones = GridFunction::constant(sh.interior_grid(), 1.0).unwrap();
        let sol = solve_linear_direct(&sh, 1.0, &ones).unwrap();
        assert_eq!(sol.y.len(), 4);
        assert!(sol.residual.max_abs <= 1e-10, "{:?}", sol.residual);
        assert!(sol.y.values()[0].abs() <= 1e-12);
    }

    #[test]
    fn green_matches_direct_up_to_sign() {
        let sh = shape("3/2", 10);
        let h = GridFunction::constant(sh.interior_grid(), 1.0).unwrap();
        let direct = solve_linear_direct(&sh, 1.0, &h).unwrap();
        let p = Problem::new(sh, 1.0, h.clone(), NonlinearitySpec::Constant(1.0)).unwrap();
        let green = solve_linear_green(&p).unwrap();
        let diff = green
            .y
            .values()
            .iter()
            .zip(direct.y.values())
            .fold(0.0f64, |m, (g, d)| m.max((g - d).abs()));
        assert!(diff <= 1e-9, "{diff}");
        assert_eq!(green.y.values()[0], 0.0);
        assert_eq!(adjudicate_green_sign(&sh, &h).unwrap().0, GREEN_SIGN);
    }

    #[test]
    fn green_needs_constant_f() {
        let sh = shape("3/2", 3);
        let h = GridFunction::constant(sh.interior_grid(), 1.0).unwrap();
        let p = Problem::new(sh, 1.0, h, NonlinearitySpec::Example2).unwrap();
        assert!(matches!(solve_linear_green(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn singular_system_is_reported() {
        let sys = DirectSystem {
            matrix: vec![vec![1.0, 2.0], vec![2.0, 4.0]],
            rhs: vec![1.0, 2.0],
        };
        assert!(matches!(sys.solve(), Err(Error::SingularSystem { column: 1, .. })));
    }

    #[test]
    fn rhs_grid_is_checked() {
        let sh = shape("3/2", 3);
        let bad = GridFunction::constant(sh.solution_grid(), 1.0).unwrap();
        assert!(solve_linear_direct(&sh, 1.0, &bad).is_err());
    }
}
