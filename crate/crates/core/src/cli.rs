//! The `fracbvp` command-line front end.
//!
//! Exit codes: 0 success, 1 error, 2 non-convergence, 3 unstable limit.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bvp_solver::{
    estimate_limit_ratio, lambda_intervals, solve_linear_direct, solve_linear_green, solve_nonlinear_fixed_point,
    FixedPointParams, LimitClass, LimitPoint, NonlinearitySpec, OperatorSign, Problem, Solution,
};
use crate::config::{example_config, parse_problem_config, print_problem_config};
use crate::error::{Error, Result};
use crate::exact_grid::{GridFunction, Rational};
use crate::green_kernel::{green_table, BvpShape};
use crate::report::{write_atomic, Report};
use crate::verify::{run_verify, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_UNSTABLE_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fracbvp", version, about = "Discrete fractional boundary value problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Green,
    Direct,
    Fixedpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    /// Iterate with the sign that makes fixed points solve the equation.
    Adjudicated,
    /// Iterate F with the plus sign.
    AsPrinted,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the problem described by a config file.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "fixedpoint")]
        method: MethodArg,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        /// Overrides lambda from the config.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        damping: f64,
        #[arg(long, value_enum, default_value = "adjudicated")]
        operator: OperatorArg,
        /// Solution CSV.
        #[arg(long)]
        out: PathBuf,
        /// Also write the report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Tabulate the Green's function.
    Green {
        #[arg(long)]
        v: String,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print D, the cone coefficient, sigma and tau.
    Constants {
        #[arg(long)]
        v: String,
        #[arg(long)]
        b: usize,
        /// Comma-separated h on [v-1, v+b]; defaults to h = 1.
        #[arg(long)]
        h: Option<String>,
    },
    /// Run the identity, kernel-bound and oracle checks for one shape.
    Verify {
        #[arg(long)]
        v: String,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Classify the limits of f(y)/y and report the admissible lambda ranges.
    Interval {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write and run one of the built-in examples.
    Example {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=3))]
        n: u32,
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        Error::UnstableLimit(_) => EXIT_UNSTABLE_LIMIT,
        _ => EXIT_ERROR,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve { config, method, tol, max_iter, lambda, damping, operator, out: path, report } => {
            let mut problem = load_problem(config)?;
            if let Some(l) = lambda {
                if !(*l > 0.0) {
                    return Err(Error::Validation { field: "lambda".into(), reason: format!("{l} is not positive") });
                }
                problem = problem.with_lambda(*l)?;
            }
            let params = FixedPointParams {
                tol: *tol,
                max_iter: *max_iter,
                damping: *damping,
                operator: match operator {
                    OperatorArg::Adjudicated => OperatorSign::Adjudicated,
                    OperatorArg::AsPrinted => OperatorSign::AsPrinted,
                },
            };
            let sol = solve(&problem, *method, &params)?;
            let text = solve_report(&problem, &sol).render();
            write_atomic(path, &sol.to_csv())?;
            if let Some(r) = report {
                write_atomic(r, &text)?;
            }
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Green { v, b, out: path } => {
            let shape = parse_shape(v, *b)?;
            let ones = GridFunction::constant(shape.interior_grid(), 1.0)?;
            let table = green_table(&shape, Some(&ones))?;
            write_atomic(path, &table.to_csv())?;
            let mut r = Report::new();
            r.push("v", shape.v())
                .push("b", shape.b())
                .push("rows", table.rows().len())
                .push("min_entry", format!("{:e}", table.min_entry()));
            out.write_all(r.render().as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Constants { v, b, h } => {
            let shape = parse_shape(v, *b)?;
            let h = match h {
                None => GridFunction::constant(shape.interior_grid(), 1.0)?,
                Some(list) => {
                    let vals = list
                        .split(',')
                        .map(|x| {
                            x.trim().parse::<f64>().map_err(|_| Error::Validation {
                                field: "h".into(),
                                reason: format!("{x:?} is not a number"),
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let h = GridFunction::new(shape.v() - 1, vals)?;
                    shape.check_h(&h)?;
                    h
                }
            };
            out.write_all(constants_report(&shape, &h)?.render().as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Verify { v, b, seed } => {
            let shape = parse_shape(v, *b)?;
            let report = run_verify(&shape, *seed)?;
            out.write_all(report.render().as_bytes())?;
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_ERROR })
        }
        Command::Interval { config } => {
            let problem = load_problem(config)?;
            let (r, _) = interval_report(&problem)?;
            out.write_all(r.render().as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Example { n, dir } => run_example(*n, dir, out),
    }
}

fn load_problem(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_problem_config(&text)
}

fn parse_shape(v: &str, b: usize) -> Result<BvpShape> {
    let v: Rational = v
        .parse()
        .map_err(|e| Error::Validation { field: "v".into(), reason: format!("{v:?}: {e}") })?;
    BvpShape::new(v, b)
}

/// Dispatches to the requested solver. `green` and `direct` need a constant `f`.
pub fn solve(problem: &Problem, method: MethodArg, params: &FixedPointParams) -> Result<Solution> {
    match method {
        MethodArg::Green => solve_linear_green(problem),
        MethodArg::Direct => {
            let NonlinearitySpec::Constant(c) = *problem.f() else {
                return Err(Error::Domain(format!(
                    "the direct method solves the linear problem only; f is {}",
                    problem.f()
                )));
            };
            solve_linear_direct(problem.shape(), problem.lambda(), &problem.h().scaled(c)?)
        }
        MethodArg::Fixedpoint => solve_nonlinear_fixed_point(problem, params),
    }
}

fn solve_report(problem: &Problem, sol: &Solution) -> Report {
    let mut r = Report::new();
    r.push("v", problem.shape().v())
        .push("b", problem.shape().b())
        .push("lambda", format!("{:?}", problem.lambda()))
        .push("f", problem.f());
    r.extend_kv(&sol.report());
    r
}

pub fn constants_report(shape: &BvpShape, h: &GridFunction) -> Result<Report> {
    let table = green_table(shape, Some(h))?;
    let d = shape.constant_d()?;
    let mut r = Report::new();
    r.push("v", shape.v())
        .push("b", shape.b())
        .push("gamma_v", format!("{:e}", shape.gamma_v()))
        .push("denominator", format!("{:e}", shape.denominator()))
        .push("D", format!("{:e}", d.value))
        .push("D.closed_form", format!("{:e}", d.closed_form))
        .push("D.argmax", d.argmax)
        .push("cone_coeff", format!("{:e}", table.cone_coeff()))
        .push("sigma", format!("{:e}", table.sigma_h().unwrap_or(f64::NAN)))
        .push("tau", format!("{:e}", table.tau_h().unwrap_or(f64::NAN)));
    Ok(r)
}

/// What `interval` decided, for callers that go on to solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalOutcome {
    /// `f(y)/y` is infinite at 0 and zero at `b⁻`.
    SublinearAtZero,
    Intervals(crate::bvp_solver::LambdaIntervals),
}

fn limit_text(c: &LimitClass) -> String {
    match c {
        LimitClass::Finite(x) => format!("{x:?}"),
        other => other.to_string(),
    }
}

pub fn interval_report(problem: &Problem) -> Result<(Report, IntervalOutcome)> {
    let shape = problem.shape();
    let table = green_table(shape, Some(problem.h()))?;
    let sigma = table.sigma_h().unwrap_or(f64::NAN);
    let tau = table.tau_h().unwrap_or(f64::NAN);
    let mut r = Report::new();
    r.push("v", shape.v())
        .push("b", shape.b())
        .push("f", problem.f())
        .push("sigma", format!("{sigma:e}"))
        .push("tau", format!("{tau:e}"));

    let at0 = estimate_limit_ratio(problem.f(), LimitPoint::Zero)?;
    r.push("limit.zero", limit_text(&at0.class));
    if at0.class == LimitClass::Infinite {
        let atb = estimate_limit_ratio(problem.f(), LimitPoint::Below(shape.b() as f64))?;
        r.push("limit.b", limit_text(&atb.class));
        if atb.class == LimitClass::Zero {
            r.push("regime", "infinite_at_zero");
            return Ok((r, IntervalOutcome::SublinearAtZero));
        }
    }
    let at_inf = estimate_limit_ratio(problem.f(), LimitPoint::Infinity)?;
    r.push("limit.infinity", limit_text(&at_inf.class));
    let (l, big_l) = (at0.class.as_f64(), at_inf.class.as_f64());
    let iv = lambda_intervals(sigma, tau, l, big_l)?;
    r.push("regime", "limits_at_zero_and_infinity")
        .push("l", format!("{l:?}"))
        .push("L", format!("{big_l:?}"))
        .push("superlinear.lower", format!("{:e}", iv.superlinear.0))
        .push("superlinear.upper", format!("{:e}", iv.superlinear.1))
        .push("superlinear.nonempty", iv.superlinear_nonempty)
        .push("sublinear.lower", format!("{:e}", iv.sublinear.0))
        .push("sublinear.upper", format!("{:e}", iv.sublinear.1))
        .push("sublinear.nonempty", iv.sublinear_nonempty);
    Ok((r, IntervalOutcome::Intervals(iv)))
}

/// `λ` for the example solve: the midpoint of the second range, else of the
/// first, else `0.9/σ`. Returns the value and where it came from.
pub fn example_lambda(outcome: &IntervalOutcome, sigma: f64) -> (f64, &'static str) {
    if let IntervalOutcome::Intervals(iv) = outcome {
        if let Some(m) = iv.sublinear_midpoint() {
            return (m, "sublinear.midpoint");
        }
        if let Some(m) = iv.superlinear_midpoint() {
            return (m, "superlinear.midpoint");
        }
    }
    (0.9 / sigma, "0.9/sigma")
}

fn run_example(n: u32, dir: &Path, out: &mut dyn Write) -> Result<i32> {
    let text = example_config(n).ok_or_else(|| Error::Validation { field: "n".into(), reason: format!("no example {n}") })?;
    std::fs::create_dir_all(dir)?;
    let problem = parse_problem_config(text)?;
    write_atomic(&dir.join(format!("example{n}.cfg")), &print_problem_config(&problem))?;

    let (mut r, outcome) = interval_report(&problem)?;
    if n == 2 {
        let sigma = green_table(problem.shape(), Some(problem.h()))?.sigma_h().unwrap_or(f64::NAN);
        let (lambda, source) = example_lambda(&outcome, sigma);
        let problem = problem.with_lambda(lambda)?;
        r.push("solve.lambda_source", source);
        let sol = solve_nonlinear_fixed_point(&problem, &FixedPointParams::default())?;
        write_atomic(&dir.join("example2_solution.csv"), &sol.to_csv())?;
        for (k, v) in solve_report(&problem, &sol).render().lines().filter_map(|l| l.split_once('=')) {
            r.push(format!("solve.{k}"), v);
        }
    }
    let text = r.render();
    write_atomic(&dir.join(format!("example{n}_report.txt")), &text)?;
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}
