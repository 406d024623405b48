//! Numerical classification of `lim f(y)/y` at 0, at a finite point, or at infinity.

use std::fmt;

use crate::error::{Error, Result};

use super::nonlinearity::NonlinearitySpec;

const INFINITE_THRESHOLD: f64 = 1e6;
const ZERO_THRESHOLD: f64 = 1e-6;
const STABILITY_REL: f64 = 1e-4;
const SAMPLE_EXPONENTS: std::ops::RangeInclusive<i32> = 2..=8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitPoint {
    Zero,
    /// One-sided approach `y -> p⁻`.
    Below(f64),
    Infinity,
}

impl LimitPoint {
    fn sample(&self, k: i32) -> f64 {
        let step = 10f64.powi(-k);
        match self {
            LimitPoint::Zero => step,
            LimitPoint::Below(p) => p - step,
            LimitPoint::Infinity => 10f64.powi(k),
        }
    }
}

impl fmt::Display for LimitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitPoint::Zero => write!(f, "0"),
            LimitPoint::Below(p) => write!(f, "{p}-"),
            LimitPoint::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitClass {
    Zero,
    Finite(f64),
    Infinite,
}

impl LimitClass {
    /// The limit as a number, with `Infinite` mapped to `f64::INFINITY`.
    pub fn as_f64(&self) -> f64 {
        match self {
            LimitClass::Zero => 0.0,
            LimitClass::Finite(x) => *x,
            LimitClass::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for LimitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitClass::Zero => write!(f, "zero"),
            LimitClass::Finite(x) => write!(f, "finite({x})"),
            LimitClass::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    pub class: LimitClass,
    /// The last ratio sampled.
    pub estimate: f64,
    /// `(y_k, f(y_k)/y_k)` for `k = 2..=8`.
    pub samples: Vec<(f64, f64)>,
}

/// Samples `r_k = f(y_k)/y_k` along `y_k = 10^{-k}`, `p - 10^{-k}` or `10^k`, `k = 2..=8`.
///
/// * zero: `|r| < 1e-6` at the last two samples;
/// * infinite: `|r_k|` nondecreasing and either `|r_8| > 1e6` or the increments
///   are not shrinking (logarithmic or faster divergence);
/// * finite: `|r_8 - r_7| <= 1e-4 (1 + |r_8|)`.
pub fn estimate_limit_ratio(f: &NonlinearitySpec, at: LimitPoint) -> Result<LimitEstimate> {
    let samples: Vec<(f64, f64)> = SAMPLE_EXPONENTS
        .map(|k| {
            let y = at.sample(k);
            (y, f.eval(y) / y)
        })
        .collect();
    let r: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let n = r.len();
    let (last, prev, prev2) = (r[n - 1], r[n - 2], r[n - 3]);
    if r.iter().any(|x| x.is_nan()) {
        return Err(Error::UnstableLimit(format!("f(y)/y is undefined near {at}: {r:?}")));
    }

    let class = if last.abs() < ZERO_THRESHOLD && prev.abs() < ZERO_THRESHOLD {
        LimitClass::Zero
    } else {
        let monotone = r.windows(2).all(|w| w[1].abs() >= w[0].abs());
        let stable = last.is_finite() && (last - prev).abs() <= STABILITY_REL * (1.0 + last.abs());
        let not_shrinking = (last - prev).abs() >= 0.5 * (prev - prev2).abs();
        if monotone && (last.abs() > INFINITE_THRESHOLD || (!stable && not_shrinking)) {
            LimitClass::Infinite
        } else if stable {
            LimitClass::Finite(last)
        } else {
            return Err(Error::UnstableLimit(format!("f(y)/y near {at} does not settle: {r:?}")));
        }
    };
    Ok(LimitEstimate { class, estimate: last, samples })
}
