//! Line-based `key = value` problem configs.
//!
//! ```text
//! # Example 2
//! v = 3/2
//! b = 10
//! lambda = 0.1
//! h = constant 1.0
//! f = builtin example2
//! ```
//!
//! `h` is `constant c` or `values h0, ..., h(b+1)`; `f` is `constant c`,
//! `builtin exampleN` or `table y:f, y:f, ...`.

use crate::bvp_solver::{NonlinearitySpec, Problem};
use crate::error::{Error, Result};
use crate::exact_grid::{GridFunction, Rational};
use crate::green_kernel::BvpShape;

const KEYS: [&str; 5] = ["v", "b", "lambda", "h", "f"];

#[derive(Debug, Clone, PartialEq)]
enum HSpec {
    Constant(f64),
    Values(Vec<f64>),
}

/// The raw fields of a config, before shape validation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub v: Rational,
    pub b: usize,
    pub lambda: f64,
    h: HSpec,
    pub f: NonlinearitySpec,
    /// Source line of each key, for error messages.
    lines: [usize; 5],
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    let x: f64 = s.trim().parse().map_err(|_| Error::Parse { line, reason: format!("expected a number, got {s:?}") })?;
    if !x.is_finite() {
        return Err(Error::Parse { line, reason: format!("{s:?} is not finite") });
    }
    Ok(x)
}

fn parse_h(s: &str, line: usize) -> Result<HSpec> {
    let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    match kind {
        "constant" => Ok(HSpec::Constant(parse_f64(rest, line)?)),
        "values" => Ok(HSpec::Values(
            rest.split(',').map(|x| parse_f64(x, line)).collect::<Result<_>>()?,
        )),
        _ => Err(Error::Parse { line, reason: format!("h must be 'constant c' or 'values ...', got {s:?}") }),
    }
}

fn parse_f(s: &str, line: usize) -> Result<NonlinearitySpec> {
    let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    let rest = rest.trim();
    match kind {
        "constant" => Ok(NonlinearitySpec::Constant(parse_f64(rest, line)?)),
        "builtin" => NonlinearitySpec::builtin(rest)
            .ok_or_else(|| Error::Parse { line, reason: format!("unknown builtin nonlinearity {rest:?}") }),
        "table" => {
            let pairs = rest
                .split(',')
                .map(|pair| {
                    let (y, f) = pair
                        .split_once(':')
                        .ok_or_else(|| Error::Parse { line, reason: format!("table entry {pair:?} is not y:f") })?;
                    Ok((parse_f64(y, line)?, parse_f64(f, line)?))
                })
                .collect::<Result<Vec<_>>>()?;
            NonlinearitySpec::table(pairs).map_err(|e| Error::Parse { line, reason: e.to_string() })
        }
        _ => Err(Error::Parse { line, reason: format!("f must be constant, builtin or table, got {s:?}") }),
    }
}

fn invalid(field: &str, line: usize, reason: impl std::fmt::Display) -> Error {
    Error::Validation { field: field.into(), reason: format!("line {line}: {reason}") }
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw: [Option<(usize, String)>; 5] = Default::default();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: n, reason: format!("expected 'key = value', got {content:?}") })?;
            let key = key.trim();
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Error::Parse { line: n, reason: format!("unknown key {key:?}") })?;
            if let Some((first, _)) = &raw[slot] {
                return Err(Error::Parse { line: n, reason: format!("duplicate key {key:?} (first on line {first})") });
            }
            raw[slot] = Some((n, value.trim().to_string()));
        }
        let mut fields = Vec::with_capacity(5);
        for (k, r) in KEYS.iter().zip(&raw) {
            let r = r.as_ref().ok_or_else(|| Error::Validation { field: k.to_string(), reason: "missing".into() })?;
            fields.push(r.clone());
        }
        let lines = [fields[0].0, fields[1].0, fields[2].0, fields[3].0, fields[4].0];

        let (ln, s) = &fields[0];
        let v: Rational = s.parse().map_err(|e| Error::Parse { line: *ln, reason: format!("v: {e}") })?;
        if !(v > 1 && v <= 2) {
            return Err(invalid("v", *ln, format!("{v} is outside (1, 2)")));
        }
        let (ln, s) = &fields[1];
        let b: usize = s.parse().map_err(|_| Error::Parse { line: *ln, reason: format!("b: expected an integer, got {s:?}") })?;
        if b < 1 {
            return Err(invalid("b", *ln, "must be at least 1"));
        }
        let (ln, s) = &fields[2];
        let lambda = parse_f64(s, *ln)?;
        if lambda <= 0.0 {
            return Err(invalid("lambda", *ln, format!("{lambda} is not positive")));
        }
        let (ln, s) = &fields[3];
        let h = parse_h(s, *ln)?;
        match &h {
            HSpec::Constant(c) if *c < 0.0 => return Err(invalid("h", *ln, "must be nonnegative")),
            HSpec::Values(vals) if vals.len() != b + 2 => {
                return Err(invalid("h", *ln, format!("needs b+2 = {} values, got {}", b + 2, vals.len())))
            }
            HSpec::Values(vals) if vals.iter().any(|x| *x < 0.0) => {
                return Err(invalid("h", *ln, "must be nonnegative"))
            }
            _ => {}
        }
        let (ln, s) = &fields[4];
        let f = parse_f(s, *ln)?;
        Ok(ProblemConfig { v, b, lambda, h, f, lines })
    }

    pub fn line_of(&self, key: &str) -> Option<usize> {
        KEYS.iter().position(|k| *k == key).map(|i| self.lines[i])
    }

    /// Builds the shape and problem; a degenerate shape surfaces as `DegenerateProblem`.
    pub fn to_problem(&self) -> Result<Problem> {
        let shape = BvpShape::new(self.v, self.b)?;
        let h = match &self.h {
            HSpec::Constant(c) => GridFunction::constant(shape.interior_grid(), *c)?,
            HSpec::Values(vals) => GridFunction::new(shape.v() - 1, vals.clone())?,
        };
        Problem::new(shape, self.lambda, h, self.f.clone())
    }
}

/// Parses the value of an `f = ...` line on its own.
pub fn parse_nonlinearity(text: &str) -> Result<NonlinearitySpec> {
    parse_f(text.trim(), 1)
}

pub fn parse_problem_config(text: &str) -> Result<Problem> {
    ProblemConfig::parse(text)?.to_problem()
}

/// The config text for `problem`; `h` is written as `constant` when all values agree.
pub fn print_problem_config(problem: &Problem) -> String {
    let shape = problem.shape();
    let hv = problem.h().values();
    let h = if hv.iter().all(|x| *x == hv[0]) {
        format!("constant {:?}", hv[0])
    } else {
        let list: Vec<String> = hv.iter().map(|x| format!("{x:?}")).collect();
        format!("values {}", list.join(", "))
    };
    format!(
        "v = {}\nb = {}\nlambda = {:?}\nh = {}\nf = {}\n",
        shape.v(),
        shape.b(),
        problem.lambda(),
        h,
        problem.f()
    )
}

/// Built-in config for example `n ∈ {1, 2, 3}`.
pub fn example_config(n: u32) -> Option<&'static str> {
    match n {
        1 => Some("# f(y) = (y^2 - 5y) log y\nv = 13/10\nb = 5\nlambda = 0.05\nh = constant 1.0\nf = builtin example1\n"),
        2 => Some("# f(y) = y (1 + e^(-y))\nv = 3/2\nb = 10\nlambda = 0.1\nh = constant 1.0\nf = builtin example2\n"),
        3 => Some("# f(y) = (7 - y) e^(1/y)\nv = 5/3\nb = 7\nlambda = 0.05\nh = constant 1.0\nf = builtin example3\n"),
        _ => None,
    }
}
