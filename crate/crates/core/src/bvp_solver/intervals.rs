use crate::error::{Error, Result};

/// The two admissible ranges of `λ`, with `l = lim_{y->0} f(y)/y` and `L = lim_{y->∞} f(y)/y`:
/// `superlinear` is `1/(τL) < λ < 1/(σl)`, `sublinear` is `1/(τl) < λ < 1/(σL)`.
///
/// Endpoints follow `1/∞ = 0` and `1/0 = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaIntervals {
    pub l: f64,
    pub big_l: f64,
    pub superlinear: (f64, f64),
    pub sublinear: (f64, f64),
    pub superlinear_nonempty: bool,
    pub sublinear_nonempty: bool,
}

impl LambdaIntervals {
    pub fn sublinear_midpoint(&self) -> Option<f64> {
        self.sublinear_nonempty.then(|| midpoint(self.sublinear))
    }

    pub fn superlinear_midpoint(&self) -> Option<f64> {
        self.superlinear_nonempty.then(|| midpoint(self.superlinear))
    }
}

fn midpoint((lo, hi): (f64, f64)) -> f64 {
    if hi.is_infinite() {
        // no finite midpoint; step one unit past the lower end
        lo + 1.0
    } else {
        0.5 * (lo + hi)
    }
}

pub fn lambda_intervals(sigma: f64, tau: f64, l: f64, big_l: f64) -> Result<LambdaIntervals> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be positive and finite, got {tau}")));
    }
    if !(sigma >= tau) || !sigma.is_finite() {
        return Err(Error::Domain(format!("sigma = {sigma} must be finite and at least tau = {tau}")));
    }
    if l.is_nan() || big_l.is_nan() || l < 0.0 || big_l < 0.0 {
        return Err(Error::Domain(format!("limits must be nonnegative, got l = {l}, L = {big_l}")));
    }
    let superlinear = (1.0 / (tau * big_l), 1.0 / (sigma * l));
    let sublinear = (1.0 / (tau * l), 1.0 / (sigma * big_l));
    Ok(LambdaIntervals {
        l,
        big_l,
        superlinear,
        sublinear,
        superlinear_nonempty: superlinear.0 < superlinear.1,
        sublinear_nonempty: sublinear.0 < sublinear.1,
    })
}
