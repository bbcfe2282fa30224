//! Argument handling for the `fixcalc` executable. Every command reads its
//! input, calls into `fixcalc_core` and prints the shared line formats.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fixcalc_core::analyses::{
    analyze_strictness_counted, bench_first, first_sets_counted, AnalysisError,
};
use fixcalc_core::report::{self, Style};
use fixcalc_core::syntax::{parse_grammar, parse_program, parse_strict_query};
use fixcalc_core::SolverKind;

/// Success.
pub const EXIT_OK: u8 = 0;
/// Bad usage, unreadable input or a parse error.
pub const EXIT_USAGE: u8 = 2;
/// A solver failed or solvers disagreed.
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "fixcalc", version, about = "Demand-driven fixpoint analyses")]
struct Cli {
    /// Print `_|_` and `eps` instead of Unicode symbols.
    #[arg(long, global = true)]
    ascii: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// FIRST set of a nonterminal.
    First {
        grammar: PathBuf,
        /// Nonterminal to query; defaults to the first production's left side.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value = "tdf", value_parser = parse_solver)]
        solver: SolverKind,
        /// Append `#rhs=N #cmp=N`.
        #[arg(long)]
        stats: bool,
    },
    /// Strictness of a function at an abstract argument vector.
    Strict {
        program: PathBuf,
        /// `name:b1,b2,...` with bits 0 or 1.
        #[arg(long)]
        query: String,
        #[arg(long, default_value = "tdf", value_parser = parse_solver)]
        solver: SolverKind,
        #[arg(long)]
        stats: bool,
    },
    /// FIRST sets for every nonterminal under all six solvers.
    Bench { grammar: PathBuf },
    /// Higher-order fixpoint of the CPS strictness example.
    HofDemo,
    /// Plain versus accumulating iteration of an oscillating functional.
    DemoOscillate,
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }

    fn violation(msg: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_VIOLATION,
            msg: msg.into(),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Failure {
        if e.is_violation() {
            Failure::violation(e.to_string())
        } else {
            Failure::usage(e.to_string())
        }
    }
}

/// Runs the command line and returns the exit code, standard output and
/// standard error.
pub fn run<I, T>(args: I) -> (u8, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (EXIT_USAGE, String::new(), text)
            } else {
                (EXIT_OK, text, String::new())
            };
        }
    };
    match execute(cli) {
        Ok(out) => (EXIT_OK, out, String::new()),
        Err(f) => (f.code, String::new(), format!("fixcalc: {}\n", f.msg)),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<String, Failure> {
    let style = Style { ascii: cli.ascii };
    let mut out = String::new();
    match cli.command {
        Command::First {
            grammar,
            start,
            solver,
            stats,
        } => {
            let g = parse_grammar(&read(&grammar)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", grammar.display())))?;
            let nt = start.unwrap_or_else(|| g.productions[0].lhs.clone());
            let first = first_sets_counted(&g, solver);
            let terms = first.query(&nt)?;
            let _ = writeln!(out, "{}", report::first_line(&nt, &terms, style));
            if stats {
                let _ = writeln!(out, "{}", report::stats_line(first.solution().stats()));
            }
        }
        Command::Strict {
            program,
            query,
            solver,
            stats,
        } => {
            let p = parse_program(&read(&program)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", program.display())))?;
            let (name, args) = parse_strict_query(&query).map_err(Failure::usage)?;
            let s = analyze_strictness_counted(&p, solver);
            let v = s.query(&name, &args)?;
            for line in report::strict_lines(&name, &args, v) {
                let _ = writeln!(out, "{line}");
            }
            if stats {
                let _ = writeln!(out, "{}", report::stats_line(s.solution().stats()));
            }
        }
        Command::Bench { grammar } => {
            let g = parse_grammar(&read(&grammar)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", grammar.display())))?;
            let rows = bench_first(&g)?;
            out.push_str(&report::bench_table(&rows));
        }
        Command::HofDemo => {
            out = report::hof_demo(style).map_err(|e| Failure::violation(e.to_string()))?;
        }
        Command::DemoOscillate => {
            out = report::oscillation_demo().map_err(|e| Failure::violation(e.to_string()))?;
        }
    }
    Ok(out)
}
