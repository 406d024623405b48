use crate::error::{Error, Result};

use super::gamma::signed_log_gamma;
use super::rational::Rational;

/// Generalized falling factorial `t^(v) = Γ(t+1) / Γ(t+1-v)`.
///
/// Pole conventions:
/// * `t+1-v` a pole and `t+1` not a pole gives 0;
/// * `t+1` a pole and `t+1-v` not a pole is a genuine infinity, reported as [`Error::Pole`];
/// * integer `v` is evaluated as a finite product, which also covers the case
///   where both Gamma arguments are poles.
pub fn falling_factorial(t: Rational, v: Rational) -> Result<f64> {
    if v.is_zero() {
        return Ok(1.0);
    }
    if v.is_integer() {
        return integer_order(t, v.numer());
    }
    let upper = t + 1;
    let lower = t + 1 - v;
    match (upper.is_nonpositive_integer(), lower.is_nonpositive_integer()) {
        (false, true) => Ok(0.0),
        (true, false) => Err(Error::Pole(format!("{t}^({v}): Γ({upper}) is infinite"))),
        // t+1 and t+1-v differ by the non-integer v, so both cannot be poles.
        (true, true) => unreachable!("non-integer order with two poles"),
        (false, false) => {
            let num = signed_log_gamma(upper.to_f64())?;
            let den = signed_log_gamma(lower.to_f64())?;
            Ok(num.sign * den.sign * (num.log_abs - den.log_abs).exp())
        }
    }
}

fn integer_order(t: Rational, v: i64) -> Result<f64> {
    if v > 0 {
        // t (t-1) ... (t-v+1)
        Ok((0..v).map(|j| (t - j).to_f64()).product())
    } else {
        // Γ(t+1)/Γ(t+1+m) = 1 / ((t+1)(t+2)...(t+m)),  m = -v
        let mut den = 1.0;
        for j in 1..=-v {
            let factor = t + j;
            if factor.is_zero() {
                return Err(Error::Pole(format!("{t}^({v}): Γ({}) is infinite", t + 1)));
            }
            den *= factor.to_f64();
        }
        Ok(1.0 / den)
    }
}
