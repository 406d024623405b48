//! Numerical checks of the discrete identities the solver relies on.
//!
//! Every check is deterministic: random inputs come from a seeded ChaCha8 stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bvp_solver::{adjudicate_green_sign, apply_operator_f, cone_membership, Problem, GREEN_SIGN};
use crate::error::Result;
use crate::exact_grid::{falling_factorial, gamma, Grid, GridFunction, Rational};
use crate::frac_calc::{fractional_difference, fractional_sum, fractional_sum_at};
use crate::green_kernel::{constant_d, verify_kernel_bounds, BvpShape};

pub const IDENTITY_TOLERANCE: f64 = 1e-10;
pub const SPAN_TOLERANCE: f64 = 1e-9;
pub const ORACLE_TOLERANCE: f64 = 1e-9;
pub const D_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_SEED: u64 = 20_130_517;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    /// The worst observed error or slack.
    pub worst: f64,
    pub detail: String,
}

impl CheckItem {
    pub fn line(&self) -> String {
        format!(
            "{} {}: worst={:e} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub items: Vec<CheckItem>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn render(&self) -> String {
        self.items.iter().map(|i| i.line() + "\n").collect()
    }
}

fn relative_error(got: f64, want: f64) -> f64 {
    let scale = got.abs().max(want.abs());
    if scale == 0.0 {
        0.0
    } else {
        (got - want).abs() / scale
    }
}

/// `(t+1)^(v) - t^(v) = v t^(v-1)` at `t = base + k`, `k < points`.
///
/// Points where either side hits a pole are skipped; returns the worst relative
/// error and the number of points compared.
pub fn power_rule_identity(v: Rational, base: Rational, points: usize) -> (f64, usize) {
    let mut worst = 0.0f64;
    let mut compared = 0;
    for t in Grid::new(base, points).points() {
        let lhs = falling_factorial(t + 1, v).and_then(|a| Ok(a - falling_factorial(t, v)?));
        let rhs = falling_factorial(t, v - 1).map(|p| v.to_f64() * p);
        if let (Ok(l), Ok(r)) = (lhs, rhs) {
            worst = worst.max(relative_error(l, r));
            compared += 1;
        }
    }
    (worst, compared)
}

/// `Δ_0^{-v} 1 (t) = t^(v) / Γ(v+1)` at `t = v + k`, `k < points`, with the
/// left side summed term by term. Returns the worst relative error.
pub fn power_sum_rule(v: Rational, points: usize) -> Result<f64> {
    let ones = GridFunction::constant(Grid::new(Rational::ZERO, points), 1.0)?;
    let scale = gamma(v.to_f64() + 1.0)?;
    let mut worst = 0.0f64;
    for k in 0..points {
        let t = v + k as i64;
        let summed = fractional_sum_at(&ones, v, t)?;
        let closed = falling_factorial(t, v)? / scale;
        worst = worst.max(relative_error(summed, closed));
    }
    Ok(worst)
}

/// `Δ^{-v} Δ^v y - y` on `[v, v+b]` minus its least-squares projection onto
/// `span{t^(v-1), t^(v-2)}`; returns the max-norm of what is left.
pub fn composition_span_residual(y: &GridFunction, v: Rational) -> Result<f64> {
    let back = fractional_sum(&fractional_difference(y, v)?, v)?;
    let mut rows = Vec::with_capacity(back.len());
    for (t, s) in back.iter() {
        let Some(orig) = y.at(t) else { continue };
        rows.push((falling_factorial(t, v - 1)?, falling_factorial(t, v - 2)?, s - orig));
    }
    // normal equations for r ≈ c1 p + c2 q
    let (mut pp, mut pq, mut qq, mut pr, mut qr) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(p, q, r) in &rows {
        pp += p * p;
        pq += p * q;
        qq += q * q;
        pr += p * r;
        qr += q * r;
    }
    let det = pp * qq - pq * pq;
    let (c1, c2) = if det.abs() > 0.0 {
        ((pr * qq - qr * pq) / det, (qr * pp - pr * pq) / det)
    } else {
        (0.0, 0.0)
    };
    Ok(rows.iter().fold(0.0f64, |m, &(p, q, r)| m.max((r - c1 * p - c2 * q).abs())))
}

/// Worst span residual over `samples` random `y` on `[v-2, v+b]` with values in `[-1, 1]`.
pub fn span_property(shape: &BvpShape, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let y = GridFunction::from_fn(shape.solution_grid(), |_| rng.random_range(-1.0..=1.0))?;
        worst = worst.max(composition_span_residual(&y, shape.v())?);
    }
    Ok(worst)
}

/// The weights `h` used by the oracle-equivalence check: constant, ramp, and a seeded random draw.
pub fn oracle_weights(shape: &BvpShape, seed: u64) -> Result<Vec<(String, GridFunction)>> {
    let grid = shape.interior_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        ("constant".into(), GridFunction::constant(grid, 1.0)?),
        ("ramp".into(), GridFunction::from_fn(grid, |t| 1.0 + t.to_f64())?),
        ("random".into(), GridFunction::from_fn(grid, |_| rng.random_range(0.0..2.0))?),
    ])
}

/// Green representation against the direct solve: returns the adjudicated
/// sign and the relative gap for each weight.
pub fn oracle_equivalence(shape: &BvpShape, seed: u64) -> Result<Vec<(String, f64, f64)>> {
    oracle_weights(shape, seed)?
        .into_iter()
        .map(|(name, h)| {
            let (sign, gap) = adjudicate_green_sign(shape, &h)?;
            let scale = crate::bvp_solver::solve_linear_direct(shape, 1.0, &h)?.y.max_abs().max(1.0);
            Ok((name, sign, gap / scale))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConePreservation {
    pub samples: usize,
    pub failures: usize,
    /// Smallest `margin / max(1, ‖F y‖)` over the images.
    pub worst_margin: f64,
}

/// Applies `F` to `samples` random cone members with norm in `[max_norm/10, max_norm]`
/// and checks that every image is in the cone.
pub fn cone_preservation(problem: &Problem, samples: usize, max_norm: f64, seed: u64) -> Result<ConePreservation> {
    let shape = problem.shape();
    let c = shape.cone_coeff()?;
    let n = shape.b() + 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..samples {
        let norm = rng.random_range(0.1 * max_norm..=max_norm);
        let peak = rng.random_range(1..n);
        let mut vals = vec![0.0; n];
        for (k, x) in vals.iter_mut().enumerate().skip(1) {
            *x = if k == peak { norm } else { rng.random_range(c * norm..=norm) };
        }
        let y = GridFunction::new(shape.v() - 2, vals)?;
        debug_assert!(cone_membership(&y, shape)?.member);
        let report = cone_membership(&apply_operator_f(&y, problem)?, shape)?;
        let rel = report.margin / report.norm.max(1.0);
        worst_margin = worst_margin.min(rel);
        if rel < -crate::bvp_solver::CONE_TOLERANCE {
            failures += 1;
        }
    }
    Ok(ConePreservation { samples, failures, worst_margin })
}

/// The full suite for one shape, as run by `fracbvp verify`.
pub fn run_verify(shape: &BvpShape, seed: u64) -> Result<VerifyReport> {
    let v = shape.v();
    let points = shape.b() + 3;
    let mut items = Vec::new();

    let mut worst = 0.0f64;
    let mut compared = 0;
    for base in [v - 2, v - 1, Rational::ZERO, v] {
        let (w, c) = power_rule_identity(v, base, points);
        worst = worst.max(w);
        compared += c;
    }
    items.push(CheckItem {
        name: "power_rule".into(),
        pass: worst <= IDENTITY_TOLERANCE && compared > 0,
        worst,
        detail: format!("points={compared}"),
    });

    let w = power_sum_rule(v, points)?;
    items.push(CheckItem {
        name: "power_sum".into(),
        pass: w <= IDENTITY_TOLERANCE,
        worst: w,
        detail: format!("points={points}"),
    });

    let w = span_property(shape, 20, seed)?;
    items.push(CheckItem {
        name: "composition_span".into(),
        pass: w <= SPAN_TOLERANCE,
        worst: w,
        detail: "samples=20".into(),
    });

    let kb = verify_kernel_bounds(shape)?;
    let worst_slack = kb.min_entry.min(kb.min_upper_slack).min(kb.min_lower_slack);
    items.push(CheckItem {
        name: "kernel_bounds".into(),
        pass: kb.pass,
        worst: worst_slack,
        detail: format!(
            "min_entry={:e} min_upper_slack={:e} min_lower_slack={:e} min_diagonal={:e}",
            kb.min_entry,
            kb.min_upper_slack,
            kb.min_lower_slack,
            kb.diagonal.iter().fold(f64::INFINITY, |m, &x| m.min(x))
        ),
    });

    let d = constant_d(v, shape.b())?;
    let gap = (d.value - d.closed_form).abs();
    items.push(CheckItem {
        name: "constant_d".into(),
        pass: gap <= D_TOLERANCE * d.value.abs().max(1.0),
        worst: gap,
        detail: format!("scan={:e} closed_form={:e} argmax={}", d.value, d.closed_form, d.argmax),
    });

    let oracle = oracle_equivalence(shape, seed)?;
    let worst = oracle.iter().fold(0.0f64, |m, o| m.max(o.2));
    let signs_agree = oracle.iter().all(|o| o.1 == GREEN_SIGN);
    items.push(CheckItem {
        name: "oracle_equivalence".into(),
        pass: signs_agree && worst <= ORACLE_TOLERANCE,
        worst,
        detail: format!("sign={GREEN_SIGN} consistent={signs_agree}"),
    });

    Ok(VerifyReport { items })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn power_rule_holds() {
        for v in ["11/10", "3/2", "19/10"] {
            let (w, c) = power_rule_identity(q(v), q(v) - 2, 15);
            assert!(c > 10);
            assert!(w <= IDENTITY_TOLERANCE, "{v}: {w}");
        }
    }

    #[test]
    fn power_sum_holds() {
        for v in ["1/2", "13/10", "3/2"] {
            assert!(power_sum_rule(q(v), 12).unwrap() <= IDENTITY_TOLERANCE);
        }
    }

    #[test]
    fn span_residual_vanishes_on_kernel() {
        // y = t^(v-1) on [v-2, ...] is annihilated by Δ^v, so Δ^{-v}Δ^v y - y = -y is in the span
        let sh = BvpShape::new(q("3/2"), 6).unwrap();
        let y = GridFunction::try_from_fn(sh.solution_grid(), |t| falling_factorial(t, q("1/2"))).unwrap();
        assert!(composition_span_residual(&y, sh.v()).unwrap() <= SPAN_TOLERANCE);
    }

    #[test]
    fn full_suite_passes_and_is_deterministic() {
        let sh = BvpShape::new(q("3/2"), 10).unwrap();
        let a = run_verify(&sh, DEFAULT_SEED).unwrap();
        assert!(a.all_pass(), "{}", a.render());
        assert_eq!(a, run_verify(&sh, DEFAULT_SEED).unwrap());
    }
}
