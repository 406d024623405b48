//! Green's function of the two-point problem
//!
//! ```text
//! -Δ^v y(t) = g(t),  t ∈ [0, b],     y(v-2) = 0,  Δy(v-2) = Δy(v+b-1)
//! ```
//!
//! on the grid `[v-2, v+b]`, together with the constants built from it:
//! `D`, the cone coefficient, and the weighted extrema `σ` and `τ`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exact_grid::{falling_factorial, gamma, Grid, GridFunction, Rational};

/// `|Γ(v-1) - (v+b-1)^(v-2)|` at or below this is treated as singular.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// Tolerance on the kernel inequalities checked by [`verify_kernel_bounds`].
pub const BOUND_SLACK_TOLERANCE: f64 = -1e-10;

/// Order `v ∈ (1, 2)` and horizon `b` of the boundary value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvpShape {
    v: Rational,
    b: usize,
    gamma_v: f64,
    gamma_v_minus_1: f64,
    denominator: f64,
}

impl BvpShape {
    pub fn new(v: Rational, b: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::Domain("horizon b must be at least 1".into()));
        }
        if v == 2 {
            return Err(Error::DegenerateProblem(
                "v = 2: Γ(v-1) - (v+b-1)^(v-2) = 1 - 1 = 0, the Green's function does not exist".into(),
            ));
        }
        if !(v > 1 && v < 2) {
            return Err(Error::Domain(format!("order v = {v} must lie in (1, 2)")));
        }
        let gamma_v_minus_1 = gamma((v - 1).to_f64())?;
        let denominator = gamma_v_minus_1 - falling_factorial(v + b as i64 - 1, v - 2)?;
        if denominator.abs() <= DEGENERACY_THRESHOLD {
            return Err(Error::DegenerateProblem(format!(
                "v = {v}, b = {b}: Green's function denominator {denominator:e} is numerically zero"
            )));
        }
        Ok(BvpShape {
            v,
            b,
            gamma_v: gamma(v.to_f64())?,
            gamma_v_minus_1,
            denominator,
        })
    }

    pub fn v(&self) -> Rational {
        self.v
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn gamma_v(&self) -> f64 {
        self.gamma_v
    }

    pub fn gamma_v_minus_1(&self) -> f64 {
        self.gamma_v_minus_1
    }

    /// `Γ(v-1) - (v+b-1)^(v-2)`.
    pub fn denominator(&self) -> f64 {
        self.denominator
    }

    /// `[v-2, v+b]`, where solutions live (b+3 points).
    pub fn solution_grid(&self) -> Grid {
        Grid::new(self.v - 2, self.b + 3)
    }

    /// `[v-1, v+b]`, the domain of `h` and of the cone minimum (b+2 points).
    pub fn interior_grid(&self) -> Grid {
        Grid::new(self.v - 1, self.b + 2)
    }

    /// `[0, b]`, where the difference equation is imposed.
    pub fn equation_grid(&self) -> Grid {
        Grid::new(Rational::ZERO, self.b + 1)
    }

    pub fn constant_d(&self) -> Result<ConstantD> {
        constant_d(self.v, self.b)
    }

    pub fn cone_coeff(&self) -> Result<f64> {
        let d = self.constant_d()?.value;
        Ok(self.gamma_v / (d * falling_factorial(self.v + self.b as i64, self.v - 1)?))
    }

    pub fn check_h(&self, h: &GridFunction) -> Result<()> {
        let want = self.interior_grid();
        if h.grid() != want {
            return Err(Error::Domain(format!(
                "h must be sampled on [{}, {}] ({} points), got base {} with {} points",
                want.base(),
                want.last().unwrap_or(want.base()),
                want.len(),
                h.base(),
                h.len()
            )));
        }
        Ok(())
    }
}

/// `G(t, s)` for `t ∈ [v-2, v+b]`, `s ∈ [0, b]`.
///
/// The term `(t-s-1)^(v-1)` is included for `s <= t - v`.
pub fn green_value(shape: &BvpShape, t: Rational, s: usize) -> Result<f64> {
    let (v, b) = (shape.v, shape.b);
    if shape.solution_grid().index_of(t).is_none() {
        return Err(Error::Domain(format!("t = {t} is not on [{}, {}]", v - 2, v + b as i64)));
    }
    if s > b {
        return Err(Error::Domain(format!("s = {s} exceeds b = {b}")));
    }
    let s_q = Rational::from(s);
    let mut g = falling_factorial(t, v - 1)? * falling_factorial(v + b as i64 - s_q - 2, v - 2)?
        / shape.denominator;
    if s_q <= t - v {
        g += falling_factorial(t - s_q - 1, v - 1)?;
    }
    Ok(g)
}

/// The constant `D` as the maximum over `s` together with its closed form (the `s = 0` term).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantD {
    pub value: f64,
    pub argmax: usize,
    pub closed_form: f64,
}

/// `D = max_s 1 + (Γ(v-1) - (v+b-1)^(v-2)) / (v+b-s-2)^(v-2)`, for `1 < v <= 2`.
pub fn constant_d(v: Rational, b: usize) -> Result<ConstantD> {
    if !(v > 1 && v <= 2) || b == 0 {
        return Err(Error::Domain(format!("D needs 1 < v <= 2 and b >= 1, got v = {v}, b = {b}")));
    }
    let numerator = gamma((v - 1).to_f64())? - falling_factorial(v + b as i64 - 1, v - 2)?;
    let term = |s: usize| -> Result<f64> {
        Ok(1.0 + numerator / falling_factorial(v + (b - s) as i64 - 2, v - 2)?)
    };
    let mut best = (0, f64::NEG_INFINITY);
    for s in 0..=b {
        let x = term(s)?;
        if x > best.1 {
            best = (s, x);
        }
    }
    Ok(ConstantD {
        value: best.1,
        argmax: best.0,
        closed_form: term(0)?,
    })
}

/// Full table of `G` plus the derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenTable {
    shape: BvpShape,
    /// `values[k][s] = G(v-2+k, s)`.
    values: Vec<Vec<f64>>,
    d: f64,
    cone_coeff: f64,
    sigma_h: Option<f64>,
    tau_h: Option<f64>,
}

impl GreenTable {
    pub fn shape(&self) -> &BvpShape {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn get(&self, k: usize, s: usize) -> f64 {
        self.values[k][s]
    }

    pub fn t_at(&self, k: usize) -> Rational {
        self.shape.solution_grid().point(k)
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn cone_coeff(&self) -> f64 {
        self.cone_coeff
    }

    pub fn sigma_h(&self) -> Option<f64> {
        self.sigma_h
    }

    pub fn tau_h(&self) -> Option<f64> {
        self.tau_h
    }

    pub fn min_entry(&self) -> f64 {
        self.values.iter().flatten().fold(f64::INFINITY, |m, &x| m.min(x))
    }

    /// `(1/Γ(v)) Σ_s G(t, s) w(s)` for every `t` of the solution grid.
    pub fn weighted_sums(&self, weights: &[f64]) -> Vec<f64> {
        assert_eq!(weights.len(), self.shape.b + 1, "one weight per s in [0, b]");
        self.values
            .iter()
            .map(|row| row.iter().zip(weights).map(|(g, w)| g * w).sum::<f64>() / self.shape.gamma_v)
            .collect()
    }

    /// Weighted sums for `w(s) = h(s+v-1)`.
    pub fn h_sums(&self, h: &GridFunction) -> Result<Vec<f64>> {
        self.shape.check_h(h)?;
        Ok(self.weighted_sums(&h.values()[..=self.shape.b]))
    }

    /// CSV with header `t,s0,...,sb`; `t` exact, entries to 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for s in 0..=self.shape.b {
            let _ = write!(out, ",s{s}");
        }
        out.push('\n');
        for (k, row) in self.values.iter().enumerate() {
            out.push_str(&self.t_at(k).to_string());
            for g in row {
                let _ = write!(out, ",{}", format_sig17(*g));
            }
            out.push('\n');
        }
        out
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn green_table(shape: &BvpShape, h: Option<&GridFunction>) -> Result<GreenTable> {
    let grid = shape.solution_grid();
    let values = grid
        .points()
        .map(|t| (0..=shape.b).map(|s| green_value(shape, t, s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut table = GreenTable {
        shape: *shape,
        values,
        d: shape.constant_d()?.value,
        cone_coeff: shape.cone_coeff()?,
        sigma_h: None,
        tau_h: None,
    };
    if let Some(h) = h {
        let (sigma, tau) = extrema(&table, h)?;
        table.sigma_h = Some(sigma);
        table.tau_h = Some(tau);
    }
    Ok(table)
}

fn extrema(table: &GreenTable, h: &GridFunction) -> Result<(f64, f64)> {
    if let Some(x) = h.values().iter().find(|&&x| x < 0.0) {
        return Err(Error::Domain(format!("h must be nonnegative, found {x}")));
    }
    // t ranges over [v-1, v+b]: skip row 0 (t = v-2).
    let sums = table.h_sums(h)?;
    let interior = &sums[1..];
    let max = interior.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = interior.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((max, min))
}

/// `σ = max_{t ∈ [v-1, v+b]} (1/Γ(v)) Σ_s G(t,s) h(s+v-1)`.
pub fn sigma(shape: &BvpShape, h: &GridFunction) -> Result<f64> {
    Ok(extrema(&green_table(shape, None)?, h)?.0)
}

/// `τ`: as [`sigma`] with a minimum.
pub fn tau(shape: &BvpShape, h: &GridFunction) -> Result<f64> {
    Ok(extrema(&green_table(shape, None)?, h)?.1)
}

/// Slack of the two kernel inequalities
///
/// * `0 <= G(t,s) <= D (v+b)^(v-1) / (s+v-1)^(v-1) · G(s+v-1, s)` for all `(t, s)`,
/// * `min_{t ∈ [v-1, v+b]} G(t,s) >= Γ(v) / (s+v-1)^(v-1) · G(s+v-1, s) > 0` for all `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBoundsReport {
    /// `G(s+v-1, s)` per `s`.
    pub diagonal: Vec<f64>,
    /// `[k][s]`: upper bound minus `G(t,s)`.
    pub upper_slack: Vec<Vec<f64>>,
    /// Per `s`: interior minimum minus lower bound.
    pub lower_slack: Vec<f64>,
    pub min_entry: f64,
    pub min_upper_slack: f64,
    pub min_lower_slack: f64,
    pub pass: bool,
}

pub fn verify_kernel_bounds(shape: &BvpShape) -> Result<KernelBoundsReport> {
    let table = green_table(shape, None)?;
    let (v, b) = (shape.v, shape.b);
    let top = falling_factorial(v + b as i64, v - 1)?;
    let mut diagonal = Vec::with_capacity(b + 1);
    let mut upper_slack = vec![vec![0.0; b + 1]; b + 3];
    let mut lower_slack = Vec::with_capacity(b + 1);
    for s in 0..=b {
        // s+v-1 is row s+1 of the table
        let diag = table.get(s + 1, s);
        let power = falling_factorial(v + s as i64 - 1, v - 1)?;
        let upper = table.d * top / power * diag;
        let lower = shape.gamma_v / power * diag;
        for (k, row) in upper_slack.iter_mut().enumerate() {
            row[s] = upper - table.get(k, s);
        }
        let interior_min = (1..b + 3).map(|k| table.get(k, s)).fold(f64::INFINITY, f64::min);
        lower_slack.push(interior_min - lower);
        diagonal.push(diag);
    }
    let min_entry = table.min_entry();
    let min_upper_slack = upper_slack.iter().flatten().fold(f64::INFINITY, |m, &x| m.min(x));
    let min_lower_slack = lower_slack.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    let pass = min_entry >= BOUND_SLACK_TOLERANCE
        && min_upper_slack >= BOUND_SLACK_TOLERANCE
        && min_lower_slack >= BOUND_SLACK_TOLERANCE
        && diagonal.iter().all(|&g| g > 0.0);
    Ok(KernelBoundsReport {
        diagonal,
        upper_slack,
        lower_slack,
        min_entry,
        min_upper_slack,
        min_lower_slack,
        pass,
    })
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

    fn ones(shape: &BvpShape) -> GridFunction {
        GridFunction::constant(shape.interior_grid(), 1.0).unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(BvpShape::new(q("2"), 5), Err(Error::DegenerateProblem(_))));
        assert!(matches!(BvpShape::new(q("1"), 5), Err(Error::Domain(_))));
        assert!(matches!(BvpShape::new(q("5/2"), 5), Err(Error::Domain(_))));
        assert!(matches!(BvpShape::new(q("3/2"), 0), Err(Error::Domain(_))));
        // den -> 0 linearly as v -> 2
        assert!(matches!(BvpShape::new(q("19999999999/10000000000"), 3), Err(Error::DegenerateProblem(_))));
    }

    #[test]
    fn first_row_vanishes() {
        for (v, b) in [("11/10", 1), ("3/2", 10), ("19/10", 12)] {
            let sh = shape(v, b);
            for s in 0..=b {
                assert_eq!(green_value(&sh, sh.v() - 2, s).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn reference_entries() {
        // 50-digit evaluations of the closed form
        let sh = shape("3/2", 10);
        let g = green_value(&sh, sh.v() + 10, 10).unwrap();
        assert!((g - 5.007_609_179_358_252_338).abs() < 1e-13 * 5.0);
        let sh = shape("13/10", 5);
        let g = green_value(&sh, sh.v() + 1, 2).unwrap();
        assert!((g - 0.221_323_980_408_621_960_2).abs() < 1e-14);
    }

    #[test]
    fn seam_adds_gamma_v() {
        // at s = t - v branch 1 exceeds branch 2 by (v-1)^(v-1) = Γ(v)
        let sh = shape("5/3", 7);
        for s in 0..=7usize {
            let t = sh.v() + s as i64;
            let with = green_value(&sh, t, s).unwrap();
            let without = falling_factorial(t, sh.v() - 1).unwrap()
                * falling_factorial(sh.v() + 7 - Rational::from(s) - 2, sh.v() - 2).unwrap()
                / sh.denominator();
            assert!((with - without - sh.gamma_v()).abs() < 1e-13);
        }
    }

    #[test]
    fn out_of_range_arguments() {
        let sh = shape("3/2", 2);
        assert!(green_value(&sh, q("7/2"), 0).is_ok());
        assert!(green_value(&sh, q("9/2"), 0).is_err());
        assert!(green_value(&sh, q("1"), 0).is_err());
        assert!(green_value(&sh, q("1/2"), 3).is_err());
    }

    #[test]
    fn small_table_shape() {
        let t = green_table(&shape("3/2", 1), None).unwrap();
        assert_eq!(t.rows().len(), 4);
        assert!(t.rows().iter().all(|r| r.len() == 2));
        assert_eq!(t.rows()[0], vec![0.0, 0.0]);
        assert_eq!(t.sigma_h(), None);
    }

    #[test]
    fn nonnegative_and_finite() {
        for v in ["11/10", "13/10", "3/2", "5/3", "19/10"] {
            for b in [1, 2, 5, 7, 10, 12] {
                let t = green_table(&shape(v, b), None).unwrap();
                assert!(t.min_entry() >= -1e-12, "v = {v}, b = {b}");
                assert!(t.rows().iter().flatten().all(|x| x.is_finite()));
                assert!(t.d() >= 1.0);
                assert!(t.cone_coeff() > 0.0 && t.cone_coeff() <= 1.0);
            }
        }
    }

    #[test]
    fn d_values() {
        assert_eq!(constant_d(q("2"), 5).unwrap().value, 1.0);
        let d = constant_d(q("3/2"), 10).unwrap();
        assert_eq!(d.argmax, 0);
        assert!((d.value - 5.720_918_400_484_963_952_5).abs() < 1e-13);
        let d = constant_d(q("13/10"), 5).unwrap();
        assert!((d.value - d.closed_form).abs() <= 1e-12);
        assert!((d.value - 9.544_380_846_655_871_933_9).abs() < 1e-12);
        assert!((constant_d(q("3/2"), 1).unwrap().value - 2.25).abs() < 1e-14);
        assert!(constant_d(q("5/2"), 1).is_err());
    }

    #[test]
    fn sigma_tau_reference() {
        // 50-digit reference values with h ≡ 1
        let cases = [
            ("13/10", 5, 13.149_531_693_025_871_31, 2.067_635_675_858_374_824_3),
            ("3/2", 10, 45.575_150_504_141_469_963, 4.448_287_010_816_103_313_6),
            ("5/3", 7, 55.267_859_351_890_905_759, 6.873_535_052_205_412_316_2),
            ("3/2", 1, 7.0, 2.4),
        ];
        for (v, b, sig, ta) in cases {
            let sh = shape(v, b);
            let t = green_table(&sh, Some(&ones(&sh))).unwrap();
            let (s, m) = (t.sigma_h().unwrap(), t.tau_h().unwrap());
            assert!(((s - sig) / sig).abs() < 1e-12, "sigma {v},{b}: {s}");
            assert!(((m - ta) / ta).abs() < 1e-12, "tau {v},{b}: {m}");
            assert!(m <= s && m > 0.0);
        }
    }

    #[test]
    fn sigma_tau_zero_and_linear() {
        let sh = shape("3/2", 10);
        let zero = GridFunction::constant(sh.interior_grid(), 0.0).unwrap();
        assert_eq!(sigma(&sh, &zero).unwrap(), 0.0);
        assert_eq!(tau(&sh, &zero).unwrap(), 0.0);
        let h = GridFunction::from_fn(sh.interior_grid(), |t| 1.0 + (t.to_f64() * 0.7).sin().abs()).unwrap();
        let s1 = sigma(&sh, &h).unwrap();
        let s2 = sigma(&sh, &h.scaled(2.0).unwrap()).unwrap();
        assert!((s2 - 2.0 * s1).abs() <= 1e-12 * s2);
        assert!(tau(&sh, &h).unwrap() <= s1);
    }

    #[test]
    fn sigma_rejects_bad_h() {
        let sh = shape("3/2", 4);
        let neg = GridFunction::constant(sh.interior_grid(), -1.0).unwrap();
        assert!(sigma(&sh, &neg).is_err());
        let wrong = GridFunction::constant(sh.solution_grid(), 1.0).unwrap();
        assert!(sigma(&sh, &wrong).is_err());
    }

    #[test]
    fn kernel_bounds_hold() {
        for (v, b) in [("13/10", 5), ("3/2", 10), ("5/3", 7)] {
            let r = verify_kernel_bounds(&shape(v, b)).unwrap();
            assert!(r.pass, "{v},{b}: {r:?}");
            assert!(r.diagonal.iter().all(|&g| g > 0.0));
        }
    }

    #[test]
    fn csv_layout() {
        let t = green_table(&shape("3/2", 1), None).unwrap();
        let csv = t.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t,s0,s1");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("-1/2,"));
        assert!(lines[4].starts_with("5/2,"));
        let first: f64 = lines[4].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(first, t.get(3, 0));
    }
}
