use std::fs;
use std::path::Path;
use std::process::Command;

use fracbvp_core::cli::run;
use fracbvp_core::config::example_config;

fn fracbvp(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("fracbvp").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_example2_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ex2.cfg", example_config(2).unwrap());
    let out = dir.path().join("y.csv");
    let (code, stdout, _) = fracbvp(&["solve", "--config", &cfg, "--method", "fixedpoint", "--lambda", "0.02", "--out", s(&out)]);
    assert_eq!(code, 0);
    let max: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("residual.max_abs="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(max <= 1e-8);
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,y\n-1/2,"));
    assert_eq!(csv.lines().count(), 1 + 13);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ex2.cfg", example_config(2).unwrap());
    let run_once = |tag: &str| {
        let out = dir.path().join(format!("{tag}.csv"));
        let rep = dir.path().join(format!("{tag}.txt"));
        let (code, _, _) = fracbvp(&[
            "solve", "--config", &cfg, "--lambda", "0.02", "--out", s(&out), "--report", s(&rep),
        ]);
        assert_eq!(code, 0);
        (fs::read(out).unwrap(), fs::read(rep).unwrap())
    };
    assert_eq!(run_once("a"), run_once("b"));
}

#[test]
fn zero_weight_gives_zero_solution() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "z.cfg", "v = 3/2\nb = 4\nlambda = 1\nh = constant 0\nf = builtin example2\n");
    let out = dir.path().join("y.csv");
    let (code, _, err) = fracbvp(&["solve", "--config", &cfg, "--method", "fixedpoint", "--out", s(&out)]);
    assert_eq!(code, 0, "{err}");
    let csv = fs::read_to_string(&out).unwrap();
    for line in csv.lines().skip(1) {
        let y: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(y, 0.0);
    }
}

#[test]
fn linear_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lin.cfg", "v = 13/10\nb = 5\nlambda = 0.5\nh = values 1, 2, 0, 1, 3, 1, 2\nf = constant 2\n");
    let read = |m: &str| {
        let out = dir.path().join(format!("{m}.csv"));
        assert_eq!(fracbvp(&["solve", "--config", &cfg, "--method", m, "--out", s(&out)]).0, 0);
        fs::read_to_string(out)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
            .collect::<Vec<_>>()
    };
    let (g, d) = (read("green"), read("direct"));
    for (a, b) in g.iter().zip(&d) {
        assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
    }
    assert_eq!(read("fixedpoint"), g);
}

#[test]
fn linear_methods_need_constant_f() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ex2.cfg", example_config(2).unwrap());
    let out = dir.path().join("y.csv");
    let (code, _, err) = fracbvp(&["solve", "--config", &cfg, "--method", "direct", "--out", s(&out)]);
    assert_eq!(code, 1);
    assert!(err.contains("linear problem"));
    assert!(!out.exists());
}

#[test]
fn degenerate_order_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "v2.cfg", "v = 2\nb = 5\nlambda = 1\nh = constant 1\nf = constant 1\n");
    let out = dir.path().join("y.csv");
    let (code, _, err) = fracbvp(&["solve", "--config", &cfg, "--method", "green", "--out", s(&out)]);
    assert_eq!(code, 1);
    assert!(err.contains("degenerate"));
    assert_eq!(fracbvp(&["green", "--v", "2", "--b", "5", "--out", s(&out)]).0, 1);
}

#[test]
fn bad_config_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "v = 3/2\nb = 4\nspeed = 3\n");
    let (code, _, err) = fracbvp(&["interval", "--config", &cfg]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn nonconvergence_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ex2.cfg", example_config(2).unwrap());
    let out = dir.path().join("y.csv");
    let (code, _, err) = fracbvp(&["solve", "--config", &cfg, "--max-iter", "2", "--out", s(&out)]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn unstable_limit_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let pairs: Vec<String> = (2..=8)
        .map(|k| {
            let y = 10f64.powi(-k);
            format!("{y:?}:{:?}", if k % 2 == 0 { y } else { 3.0 * y })
        })
        .collect();
    let text = format!("v = 3/2\nb = 4\nlambda = 1\nh = constant 1\nf = table {}\n", pairs.join(", "));
    let cfg = write(dir.path(), "zig.cfg", &text);
    let (code, _, err) = fracbvp(&["interval", "--config", &cfg]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn interval_classifies_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cfg1 = write(dir.path(), "ex1.cfg", example_config(1).unwrap());
    let (code, out, _) = fracbvp(&["interval", "--config", &cfg1]);
    assert_eq!(code, 0);
    assert!(out.contains("limit.zero=infinite\nlimit.b=zero\nregime=infinite_at_zero\n"));
    let cfg2 = write(dir.path(), "ex2.cfg", example_config(2).unwrap());
    let (code, out, _) = fracbvp(&["interval", "--config", &cfg2]);
    assert_eq!(code, 0);
    assert!(out.contains("L=1.0\n"));
    assert!(out.contains("sublinear.nonempty=false"));
    let l: f64 = out.lines().find_map(|l| l.strip_prefix("l=")).unwrap().parse().unwrap();
    assert!((l - 2.0).abs() <= 1e-4);
}

#[test]
fn green_table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let (code, _, _) = fracbvp(&["green", "--v", "3/2", "--b", "3", "--out", s(&out)]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,s0,s1,s2,s3"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn constants_with_weights() {
    let (code, out, _) = fracbvp(&["constants", "--v", "3/2", "--b", "2", "--h", "1, 1, 1, 1"]);
    assert_eq!(code, 0);
    assert!(out.contains("D.argmax=0"));
    let (code, _, _) = fracbvp(&["constants", "--v", "3/2", "--b", "2", "--h", "1, 1"]);
    assert_eq!(code, 1);
}

#[test]
fn verify_passes_on_example_shapes() {
    for (v, b) in [("3/2", "10"), ("13/10", "5")] {
        let (code, out, _) = fracbvp(&["verify", "--v", v, "--b", b]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.lines().count(), 6);
        assert!(out.lines().all(|l| l.starts_with("PASS")));
    }
}

#[test]
fn example_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["1", "2", "3"] {
        let (code, _, err) = fracbvp(&["example", n, "--dir", s(dir.path())]);
        assert_eq!(code, 0, "{err}");
    }
    let cfg = fs::read_to_string(dir.path().join("example3.cfg")).unwrap();
    assert!(cfg.starts_with("v = 5/3\nb = 7\n"));
    assert!(dir.path().join("example2_solution.csv").exists());
    assert!(!dir.path().join("example1_solution.csv").exists());
    assert_eq!(fracbvp(&["example", "4"]).0, 1);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(fracbvp(&["frobnicate"]).0, 1);
    let (code, out, _) = fracbvp(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("solve"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_fracbvp");
    let st = Command::new(bin).args(["verify", "--v", "2", "--b", "5"]).status().unwrap();
    assert_eq!(st.code(), Some(1));
    let st = Command::new(bin).args(["verify", "--v", "5/3", "--b", "7"]).status().unwrap();
    assert_eq!(st.code(), Some(0));
}
