//! Demand-driven fixpoint iteration over lattice-like domains.
//!
//! The crate is layered bottom-up:
//!
//! - [`domain`]: the universal [`Value`] carrier, the [`Domain`] operation
//!   bundle and the domain combinators (flat strings, naturals, lists,
//!   tuples, sets, function graphs).
//! - [`solvers`]: second-order fixpoint operators over function graphs
//!   (Kleene, Dep, TD, W, TDF, TDF-sub), memoization and instrumentation.
//! - [`hof`]: need-instrumented higher-order values and the higher-order
//!   fixpoint operator.
//! - [`analyses`]: client analyses built on the solvers (strictness, FIRST
//!   sets) and the demo functionals.
//! - [`syntax`]: text formats for grammars and programs.
//! - [`report`]: fixed line formats shared by the command line and the
//!   browser demo.

pub mod analyses;
pub mod domain;
pub mod hof;
pub mod report;
pub mod solvers;
pub mod syntax;

pub use domain::{Dom, Domain, DomainError, FunctionGraph, Value};
pub use solvers::{SolveError, SolverKind, SolverStats};
