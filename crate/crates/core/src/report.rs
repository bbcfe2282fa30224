//! Fixed line formats shared by the command line and the browser demo,
//! and the two canned demos.

use std::fmt::Write as _;

use crate::analyses::{cps_demo_functional, oscillation_fixture, oscillation_universe, BenchRow};
use crate::domain::{nat_domain, GraphDomain, Value};
use crate::hof::{hof_fix, HValue, Needs, Res, ResGraph};
use crate::solvers::{fix_kleene, fix_tdf, partial_iteration, SolveError, SolverStats};

/// Text substitutions for terminals without Unicode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Style {
    pub ascii: bool,
}

impl Style {
    pub fn bottom(self) -> &'static str {
        if self.ascii {
            "_|_"
        } else {
            "⊥"
        }
    }

    pub fn epsilon(self) -> &'static str {
        if self.ascii {
            "eps"
        } else {
            "ε"
        }
    }

    fn fix(self, s: String) -> String {
        if self.ascii {
            s.replace('⊥', "_|_")
        } else {
            s
        }
    }
}

/// `first(exp) = { "(", "name", "number" }`, with `""` shown as epsilon.
pub fn first_line(nt: &str, terms: &[String], style: Style) -> String {
    let items: Vec<String> = terms
        .iter()
        .map(|t| {
            if t.is_empty() {
                style.epsilon().to_string()
            } else {
                format!("{t:?}")
            }
        })
        .collect();
    if items.is_empty() {
        format!("first({nt}) = {{ }}")
    } else {
        format!("first({nt}) = {{ {} }}", items.join(", "))
    }
}

pub fn stats_line(stats: SolverStats) -> String {
    format!("#rhs={} #cmp={}", stats.rhs_evals, stats.cmp_count)
}

/// The result line, plus an interpretation line when exactly one
/// argument is 0.
pub fn strict_lines(name: &str, args: &[u64], value: u64) -> Vec<String> {
    let bits: Vec<String> = args.iter().map(u64::to_string).collect();
    let mut out = vec![format!("strict({name}, [{}]) = {value}", bits.join(","))];
    let zeros: Vec<usize> = (0..args.len()).filter(|&i| args[i] == 0).collect();
    if let [i] = zeros[..] {
        let verdict = if value == 0 { "strict" } else { "not strict" };
        out.push(format!("{name} is {verdict} in parameter {i}"));
    }
    out
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<8} {:>8} {:>6}", "Method", "#cmp", "#rhs");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<8} {:>8} {:>6}",
            r.kind.to_string(),
            r.stats.cmp_count,
            r.stats.rhs_evals
        );
    }
    out.push_str("#cmp: string comparisons (leq, equal, compare) in keys and sets\n");
    out.push_str("#rhs: evaluations of the functional, confirming passes included\n");
    out
}

/// Entries of a higher-order tabulation worth showing: calls of named
/// functions with an atomic, non-bottom result. Partial applications
/// (graph results) are left out, and so are bottom results, which say no
/// more than an absent entry.
pub fn hof_entries(g: &ResGraph) -> Vec<(&Vec<Res>, &(Res, Needs))> {
    g.iter()
        .filter(|(k, (r, _))| {
            matches!(k.first(), Some(Res::Str(_))) && !matches!(r, Res::Graph(_) | Res::Bot)
        })
        .collect()
}

/// `g: [1,{[1]->1}] => (1, [[],[[1]]])`. Position 0, the function name,
/// is dropped from both the arguments and the needs.
pub fn hof_line(key: &[Res], value: &Res, needs: &Needs, style: Style) -> String {
    let name = match key.first() {
        Some(Res::Str(s)) => s.clone(),
        Some(other) => other.to_string(),
        None => String::new(),
    };
    let args: Vec<String> = key.iter().skip(1).map(Res::to_string).collect();
    let rest = Needs(needs.0.iter().skip(1).cloned().collect());
    let needs = if rest.is_empty() {
        "[]".to_string()
    } else {
        rest.to_string()
    };
    style.fix(format!(
        "{name}: [{}] => ({value}, {needs})",
        args.join(",")
    ))
}

/// Runs the CPS strictness example at `["ft", 1]` and prints the stable
/// tabulation followed by the query result.
pub fn hof_demo(style: Style) -> Result<String, SolveError> {
    let fix = hof_fix(cps_demo_functional());
    let v = fix.query(&[HValue::str("ft"), HValue::Nat(1)])?;
    let graph = fix.graph();
    let mut out = String::new();
    for (k, (r, n)) in hof_entries(&graph) {
        out.push_str(&hof_line(k, r, n, style));
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "{}",
        style.fix(format!("ft [1] = {}", crate::hof::v2r(&v)))
    );
    Ok(out)
}

/// Plain re-evaluation of the oscillating functional at `x = 1`, then the
/// accumulating TDF passes, then the Kleene result as a cross-check.
pub fn oscillation_demo() -> Result<String, SolveError> {
    let f = oscillation_fixture();
    let graphs = GraphDomain::new(nat_domain(), nat_domain());
    let x = vec![Value::Nat(1)];
    let seq = partial_iteration(&f, &graphs, std::slice::from_ref(&x), 10, false)?;

    let mut out = String::from("naive iteration at x = 1 over S = {1}:\n");
    for (i, phi) in seq.iter().take(5).enumerate() {
        let _ = writeln!(
            out,
            "  phi{i}(1) = {}",
            graphs.res().render(&graphs.lookup(phi, &x))
        );
    }
    let cycle = (1..seq.len()).find_map(|j| {
        (0..j)
            .find(|&i| graphs.graph_eq(&seq[i], &seq[j]))
            .map(|i| (i, j))
    });
    match cycle {
        Some((i, j)) => {
            let _ = writeln!(out, "cycle detected: phi{j} = phi{i}, period {}", j - i);
        }
        None => out.push_str("no cycle within 10 steps\n"),
    }

    let tdf = fix_tdf(nat_domain(), nat_domain(), f.clone());
    let v = tdf.query(&x)?;
    out.push_str("TDF passes at x = 1:\n");
    for (i, pass) in tdf.passes().iter().enumerate() {
        let _ = writeln!(out, "  pass {}: {}", i + 1, graphs.render_graph(pass));
    }
    let _ = writeln!(out, "fix = {}", graphs.res().render(&v));

    let kleene = fix_kleene(nat_domain(), nat_domain(), f, oscillation_universe());
    let lfp = kleene.query(&x)?;
    if lfp != v {
        return Err(SolveError::Functional(format!(
            "TDF gave {} but the full tabulation gives {}",
            graphs.res().render(&v),
            graphs.res().render(&lfp)
        )));
    }
    let _ = writeln!(out, "lfp G (1) = {}", graphs.res().render(&lfp));
    Ok(out)
}
