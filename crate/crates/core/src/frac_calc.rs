//! Delta-type fractional sums and differences on `N_a` grids.

use crate::error::{Error, Result};
use crate::exact_grid::{falling_factorial, gamma, GridFunction, Rational};

/// A fractional order `v > 0` with its integer ceiling `N`, so `N-1 < v <= N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FracOrder {
    v: Rational,
    n: usize,
}

impl FracOrder {
    pub fn new(v: Rational) -> Result<Self> {
        if !v.is_positive() {
            return Err(Error::Domain(format!("fractional order must be positive, got {v}")));
        }
        Ok(FracOrder { v, n: v.ceil() as usize })
    }

    pub fn v(&self) -> Rational {
        self.v
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Iterated forward difference `Δf(t) = f(t+1) - f(t)`, applied `order` times.
pub fn forward_difference(f: &GridFunction, order: usize) -> Result<GridFunction> {
    if order > 0 && f.len() <= order {
        return Err(Error::InsufficientGrid { length: f.len(), order });
    }
    let mut values = f.values().to_vec();
    for _ in 0..order {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    GridFunction::new(f.base(), values)
}

/// The `v`-th fractional sum evaluated at a single point `t ∈ a + v + Z`.
///
/// Returns 0 when `t - v < a` (empty sum).
pub fn fractional_sum_at(f: &GridFunction, v: Rational, t: Rational) -> Result<f64> {
    if !v.is_positive() {
        return Err(Error::Domain(format!("fractional sum order must be positive, got {v}")));
    }
    let a = f.base();
    let upper = t - v;
    let Some(top) = upper.integer_offset_from(a) else {
        return Err(Error::Domain(format!("t = {t} is not on the grid {a} + {v} + Z")));
    };
    if top < 0 {
        return Ok(0.0);
    }
    let top = top as usize;
    if top >= f.len() {
        return Err(Error::InsufficientGrid { length: f.len(), order: top + 1 });
    }
    let mut acc = 0.0;
    for (j, fs) in f.values()[..=top].iter().enumerate() {
        let s = a + j as i64;
        acc += falling_factorial(t - s - 1, v - 1)? * fs;
    }
    Ok(acc / gamma(v.to_f64())?)
}

/// The `v`-th fractional sum. The result lives on base `a + v` with the same length.
pub fn fractional_sum(f: &GridFunction, v: Rational) -> Result<GridFunction> {
    if !v.is_positive() {
        return Err(Error::Domain(format!("fractional sum order must be positive, got {v}")));
    }
    let base = f.base() + v;
    let values = (0..f.len())
        .map(|k| fractional_sum_at(f, v, base + k as i64))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(base, values)
}

/// The `v`-th fractional difference `Δ^N Δ^{v-N}`, with result base `a + N - v`.
pub fn fractional_difference(f: &GridFunction, v: Rational) -> Result<GridFunction> {
    let order = FracOrder::new(v)?;
    let n = order.n();
    if f.len() <= n {
        return Err(Error::InsufficientGrid { length: f.len(), order: n });
    }
    let inner_order = Rational::from(n) - v;
    let inner = if inner_order.is_zero() {
        f.clone()
    } else {
        fractional_sum(f, inner_order)?
    };
    forward_difference(&inner, n)
}
