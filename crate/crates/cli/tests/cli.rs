use std::path::PathBuf;

use fixcalc_cli::{run, EXIT_OK, EXIT_USAGE};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn fixcalc(args: &[&str]) -> (u8, String, String) {
    run(std::iter::once("fixcalc").chain(args.iter().copied()))
}

#[test]
fn first_defaults_to_the_first_lhs() {
    let (code, out, _) = fixcalc(&["first", &data("expr.grammar")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "first(exp) = { \"(\", \"name\", \"number\" }\n");
}

#[test]
fn every_solver_prints_the_same_first_set() {
    for solver in ["kleene", "dep", "td", "w", "tdf", "tdf-sub"] {
        let (code, out, _) = fixcalc(&[
            "first",
            &data("expr.grammar"),
            "--start",
            "factor",
            "--solver",
            solver,
        ]);
        assert_eq!(code, EXIT_OK, "{solver}");
        assert_eq!(
            out, "first(factor) = { \"(\", \"name\", \"number\" }\n",
            "{solver}"
        );
    }
}

#[test]
fn stats_line_follows() {
    let (_, out, _) = fixcalc(&["first", &data("expr.grammar"), "--stats"]);
    let stats = out.lines().nth(1).unwrap();
    assert!(
        stats.starts_with("#rhs=") && stats.contains(" #cmp="),
        "{stats}"
    );
    assert!(!stats.ends_with("#cmp=0"));
}

#[test]
fn epsilon_rendering() {
    let (_, out, _) = fixcalc(&["first", &data("eps.grammar")]);
    assert_eq!(out, "first(A) = { ε }\n");
    let (_, out, _) = fixcalc(&["--ascii", "first", &data("eps.grammar")]);
    assert_eq!(out, "first(A) = { eps }\n");
    let (_, out, _) = fixcalc(&["first", &data("single.grammar")]);
    assert_eq!(out, "first(A) = { \"a\" }\n");
}

#[test]
fn strict_output() {
    let (code, out, _) = fixcalc(&["strict", &data("swap.prog"), "--query", "f:0,1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "strict(f, [0,1]) = 0\nf is strict in parameter 0\n");
    let (_, out, _) = fixcalc(&[
        "strict",
        &data("cond.prog"),
        "--query",
        "g:1,1,1",
        "--stats",
    ]);
    assert!(out.starts_with("strict(g, [1,1,1]) = 1\n#rhs="));
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 8] = [
        &[],
        &["frobnicate"],
        &["first", "/nonexistent/grammar"],
        &["first", &data("empty.grammar")],
        &["first", &data("expr.grammar"), "--start", "nope"],
        &["first", &data("expr.grammar"), "--solver", "bogus"],
        &["strict", &data("add.prog"), "--query", "f:0"],
        &["strict", &data("add.prog"), "--query", "f:0,2"],
    ];
    for args in cases {
        let (code, out, err) = fixcalc(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_errors_carry_positions() {
    let dir = std::env::temp_dir().join(format!("fixcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.grammar");
    std::fs::write(&bad, "A : \"a\"\nB : \"unterminated\n").unwrap();
    let (code, _, err) = fixcalc(&["first", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn bench_table() {
    let (code, out, _) = fixcalc(&["bench", &data("expr.grammar")]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("Method"));
    let names: Vec<&str> = lines[1..7]
        .iter()
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(names, ["Kleene", "Dep", "TD", "W", "TDF", "TDF-sub"]);
}

#[test]
fn demos() {
    let (code, out, _) = fixcalc(&["--ascii", "hof-demo"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("ft [1] = 1\n"));
    let (code, out, _) = fixcalc(&["demo-oscillate"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("cycle detected: phi3 = phi1, period 2"));
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = fixcalc(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("hof-demo"));
}
