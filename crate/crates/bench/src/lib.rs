//! Fixtures shared by the criterion benches.

use dualproof::harness::{generate_suite, GenParams, Problem};
use dualproof::parser::{parse_formula, ParsedProblem};
use dualproof::{parse_problem, Formula, ProblemSource};

pub const DAVE: &str = "\
∀x (Green(x, False) ∨ Nice(x, True))
∀x (Smart(x, False) ∨ Green(x, True))
Smart(Dave, True)
? Nice(Dave, False)
";

pub fn dave() -> ParsedProblem {
    parse_problem(&ProblemSource::from_text("dave", DAVE).expect("fixture reads")).expect("fixture parses")
}

/// Rule chain of the given depth over one constant, provable from the fact at its start.
pub fn chain(depth: usize) -> ParsedProblem {
    let mut text = String::from("P0(Anne, True)\n");
    for i in 0..depth {
        text.push_str(&format!("∀x (P{i}(x, False) ∨ P{}(x, True))\n", i + 1));
    }
    text.push_str(&format!("? P{depth}(Anne, True)\n"));
    parse_problem(&ProblemSource::from_text("chain", &text).expect("chain reads")).expect("chain parses")
}

pub fn suite(problems: usize) -> Vec<Problem> {
    generate_suite(42, &GenParams { problems, ..GenParams::default() }).expect("default params are valid")
}

/// Nested ⊕ and ↔ over eight atoms, the worst case for CNF distribution.
pub fn xor_ladder() -> Formula {
    parse_formula("(A(True) ⊕ B(True)) ↔ (C(True) ⊕ D(True)) ⊕ (E(True) ↔ F(True)) ⊕ (G(True) ⊕ H(True))")
        .expect("fixture parses")
}
