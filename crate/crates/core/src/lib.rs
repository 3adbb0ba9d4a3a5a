//! Dual-path resolution reasoning over first-order premises.
//!
//! A problem is a list of premise formulas and a ground atomic query `S`.
//! Both `S` and `¬S` are refuted independently by linear resolution against
//! the clausal form of the premises, and the two outcomes are combined into
//! True, False, Unknown or SelfContradictory.

pub mod ast;
pub mod decompose;
pub mod engine;
pub mod harness;
pub mod oracle;
pub mod parser;
pub mod resolver;
pub mod search;
pub mod translator;

pub use ast::{Answer, Clause, Formula, Literal, Origin, Sign, Term};
pub use engine::{solve, solve_source, EngineConfig, EngineError, Verdict};
pub use parser::{parse_formula, parse_problem, render, ProblemSource};
