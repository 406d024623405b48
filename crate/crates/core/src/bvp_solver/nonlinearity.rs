use std::fmt;

use crate::error::{Error, Result};

/// Arguments of `log y` and `e^{1/y}` are clamped to at least this.
pub const CLAMP_FLOOR: f64 = 1e-12;

/// The nonlinearity `f` on the right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearitySpec {
    Constant(f64),
    /// `(y² - 5y) log y`
    Example1,
    /// `y (1 + e^{-y})`
    Example2,
    /// `(7 - y) e^{1/y}`
    Example3,
    /// Piecewise linear through `(y, f(y))` pairs sorted by `y`, constant outside.
    Table(Vec<(f64, f64)>),
}

/// One evaluation of `f`, with flags for the guards that fired.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub clamped: bool,
    pub extrapolated: bool,
}

impl NonlinearitySpec {
    pub fn table(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Domain("nonlinearity table is empty".into()));
        }
        if pairs.iter().any(|(y, f)| !y.is_finite() || !f.is_finite()) {
            return Err(Error::Domain("nonlinearity table has non-finite entries".into()));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("nonlinearity table repeats a y value".into()));
        }
        Ok(NonlinearitySpec::Table(pairs))
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "example1" => Some(NonlinearitySpec::Example1),
            "example2" => Some(NonlinearitySpec::Example2),
            "example3" => Some(NonlinearitySpec::Example3),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, NonlinearitySpec::Constant(_))
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.evaluate(y).value
    }

    pub fn evaluate(&self, y: f64) -> Evaluation {
        let plain = |value| Evaluation { value, clamped: false, extrapolated: false };
        match self {
            NonlinearitySpec::Constant(c) => plain(*c),
            NonlinearitySpec::Example1 => {
                let (x, clamped) = clamp(y);
                Evaluation { value: (x * x - 5.0 * x) * x.ln(), clamped, extrapolated: false }
            }
            NonlinearitySpec::Example2 => plain(y * (1.0 + (-y).exp())),
            NonlinearitySpec::Example3 => {
                let (x, clamped) = clamp(y);
                Evaluation { value: (7.0 - x) * (1.0 / x).exp(), clamped, extrapolated: false }
            }
            NonlinearitySpec::Table(pairs) => interpolate(pairs, y),
        }
    }
}

fn clamp(y: f64) -> (f64, bool) {
    if y < CLAMP_FLOOR {
        (CLAMP_FLOOR, true)
    } else {
        (y, false)
    }
}

fn interpolate(pairs: &[(f64, f64)], y: f64) -> Evaluation {
    let (first, last) = (pairs[0], pairs[pairs.len() - 1]);
    let outside = |value| Evaluation { value, clamped: false, extrapolated: true };
    if y < first.0 {
        return outside(first.1);
    }
    if y > last.0 {
        return outside(last.1);
    }
    let i = pairs.partition_point(|p| p.0 <= y).clamp(1, pairs.len().max(2) - 1);
    let value = if pairs.len() == 1 {
        first.1
    } else {
        let (y0, f0) = pairs[i - 1];
        let (y1, f1) = pairs[i];
        f0 + (f1 - f0) * (y - y0) / (y1 - y0)
    };
    Evaluation { value, clamped: false, extrapolated: false }
}

impl fmt::Display for NonlinearitySpec {
    /// The config-file form, e.g. `builtin example2` or `table 0:0, 1:2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonlinearitySpec::Constant(c) => write!(f, "constant {c:?}"),
            NonlinearitySpec::Example1 => write!(f, "builtin example1"),
            NonlinearitySpec::Example2 => write!(f, "builtin example2"),
            NonlinearitySpec::Example3 => write!(f, "builtin example3"),
            NonlinearitySpec::Table(pairs) => {
                write!(f, "table ")?;
                for (i, (y, v)) in pairs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{y:?}:{v:?}")?;
                }
                Ok(())
            }
        }
    }
}
