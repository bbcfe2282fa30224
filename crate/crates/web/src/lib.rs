//! WebAssembly bindings for the static page in `www/`. Each export takes
//! the text from a form field and returns the lines the command line would
//! print, or an error message.

use fixcalc_core::analyses::{analyze_strictness_counted, bench_first, first_sets_counted};
use fixcalc_core::report::{self, Style};
use fixcalc_core::syntax::{parse_grammar, parse_program, parse_strict_query};
use fixcalc_core::SolverKind;
use wasm_bindgen::prelude::*;

fn solver(name: &str) -> Result<SolverKind, String> {
    name.parse().map_err(|e| format!("{e}"))
}

/// FIRST set of every nonterminal, then the solver counters.
pub fn first_text(grammar: &str, solver_name: &str) -> Result<String, String> {
    let g = parse_grammar(grammar).map_err(|e| e.to_string())?;
    let first = first_sets_counted(&g, solver(solver_name)?);
    let mut out = String::new();
    for nt in g.nonterminals() {
        let terms = first.query(&nt).map_err(|e| e.to_string())?;
        out.push_str(&report::first_line(&nt, &terms, Style::default()));
        out.push('\n');
    }
    out.push_str(&report::stats_line(first.solution().stats()));
    out.push('\n');
    Ok(out)
}

/// `query` is `name:b1,b2,...` as on the command line.
pub fn strict_text(program: &str, query: &str, solver_name: &str) -> Result<String, String> {
    let p = parse_program(program).map_err(|e| e.to_string())?;
    let (name, args) = parse_strict_query(query)?;
    let s = analyze_strictness_counted(&p, solver(solver_name)?);
    let v = s.query(&name, &args).map_err(|e| e.to_string())?;
    let mut out = report::strict_lines(&name, &args, v).join("\n");
    out.push('\n');
    out.push_str(&report::stats_line(s.solution().stats()));
    out.push('\n');
    Ok(out)
}

pub fn bench_text(grammar: &str) -> Result<String, String> {
    let g = parse_grammar(grammar).map_err(|e| e.to_string())?;
    let rows = bench_first(&g).map_err(|e| e.to_string())?;
    Ok(report::bench_table(&rows))
}

#[wasm_bindgen]
pub fn first(grammar: &str, solver: &str) -> Result<String, JsValue> {
    first_text(grammar, solver).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn strict(program: &str, query: &str, solver: &str) -> Result<String, JsValue> {
    strict_text(program, query, solver).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bench(grammar: &str) -> Result<String, JsValue> {
    bench_text(grammar).map_err(|e| JsValue::from_str(&e))
}
