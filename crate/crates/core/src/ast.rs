//! Terms, literals, clauses and formulas shared by every stage of the pipeline.
//!
//! Polarity is always carried by [`Literal::sign`]. The trailing `True`/`False`
//! argument used in source text is folded into the sign when a literal is
//! built, and re-emitted only when rendering.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Argument value standing for a positive polarity marker in source text.
pub const TRUE_MARKER: &str = "True";
/// Argument value standing for a negative polarity marker in source text.
pub const FALSE_MARKER: &str = "False";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AstError {
    #[error("malformed literal {predicate}: polarity marker at argument {position} is not the last argument")]
    MalformedLiteral { predicate: String, position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    /// Only produced by skolemization.
    Func(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::Const(_) => false,
            Term::Func(_, args) => args.iter().any(|t| t.contains_var(name)),
        }
    }

    pub fn has_function(&self) -> bool {
        matches!(self, Term::Func(..))
    }

    /// Appends variable names in order of first occurrence.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Func(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn collect_constants(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
            Term::Func(f, args) => {
                if !out.contains(f) {
                    out.push(f.clone());
                }
                args.iter().for_each(|t| t.collect_constants(out));
            }
        }
    }

    pub fn rename_vars(&self, map: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::Const(_) => self.clone(),
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|t| t.rename_vars(map)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn marker(self) -> &'static str {
        match self {
            Sign::Positive => TRUE_MARKER,
            Sign::Negative => FALSE_MARKER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<Term>,
    pub sign: Sign,
}

impl Literal {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>, sign: Sign) -> Self {
        Literal { predicate: predicate.into(), args, sign }
    }

    pub fn positive(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self::new(predicate, args, Sign::Positive)
    }

    pub fn negative(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self::new(predicate, args, Sign::Negative)
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn negated(&self) -> Literal {
        Literal { sign: self.sign.flip(), ..self.clone() }
    }

    /// Same predicate, arity and arguments, opposite sign.
    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.sign != other.sign && self.predicate == other.predicate && self.args == other.args
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        self.args.iter().for_each(|t| t.collect_vars(out));
    }

    pub fn rename_vars(&self, map: &BTreeMap<String, String>) -> Literal {
        Literal {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|t| t.rename_vars(map)).collect(),
            sign: self.sign,
        }
    }

    /// Argument list with the polarity marker appended, as written in source text.
    pub fn marker_args(&self) -> Vec<Term> {
        let mut args = self.args.clone();
        args.push(Term::Const(self.sign.marker().to_string()));
        args
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for a in &self.args {
            write!(f, "{a}, ")?;
        }
        write!(f, "{})", self.sign.marker())
    }
}

/// Builds a canonical literal from source-level pieces.
///
/// A trailing `True`/`False` argument is consumed as polarity; every outer
/// negation flips it once.
pub fn canonicalize_literal(
    predicate: &str,
    raw_args: Vec<Term>,
    outer_negations: usize,
) -> Result<Literal, AstError> {
    let is_marker = |t: &Term| matches!(t, Term::Const(c) if c == TRUE_MARKER || c == FALSE_MARKER);
    let mut args = raw_args;
    if let Some(position) = args.iter().position(is_marker) {
        if position + 1 != args.len() {
            return Err(AstError::MalformedLiteral { predicate: predicate.to_string(), position });
        }
    }
    let mut sign = match args.last() {
        Some(Term::Const(c)) if c == FALSE_MARKER => Sign::Negative,
        _ => Sign::Positive,
    };
    if args.last().is_some_and(is_marker) {
        args.pop();
    }
    if outer_negations % 2 == 1 {
        sign = sign.flip();
    }
    Ok(Literal::new(predicate, args, sign))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum Origin {
    /// 1-based index of the premise formula the clause came from.
    Premise(usize),
    /// 1-based step number of the resolution that produced the clause.
    Derived(usize),
    Query,
    NegatedQuery,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Premise(i) => write!(f, "premise:{i}"),
            Origin::Derived(i) => write!(f, "derived:{i}"),
            Origin::Query => f.write_str("query"),
            Origin::NegatedQuery => f.write_str("negated-query"),
        }
    }
}

/// A disjunction of literals. Variables are implicitly universal.
///
/// Literal order is kept for rendering; equality compares literal multisets
/// and ignores the origin.
#[derive(Debug, Clone)]
pub struct Clause {
    literals: Vec<Literal>,
    pub origin: Origin,
}

impl Clause {
    /// Builds a clause, dropping repeated literals (first occurrence wins).
    pub fn new(literals: Vec<Literal>, origin: Origin) -> Self {
        let mut out: Vec<Literal> = Vec::with_capacity(literals.len());
        for lit in literals {
            if !out.contains(&lit) {
                out.push(lit);
            }
        }
        Clause { literals: out, origin }
    }

    pub fn empty(origin: Origin) -> Self {
        Clause { literals: Vec::new(), origin }
    }

    pub fn unit(literal: Literal, origin: Origin) -> Self {
        Clause { literals: vec![literal], origin }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.literals.len() == 1
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    /// True when some literal appears with both signs.
    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .enumerate()
            .any(|(i, a)| self.literals[i + 1..].iter().any(|b| a.is_complement_of(b)))
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(Literal::is_ground)
    }

    pub fn has_function_terms(&self) -> bool {
        self.literals.iter().flat_map(|l| &l.args).any(|t| matches!(t, Term::Func(..)))
    }

    /// Variable names in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.literals.iter().for_each(|l| l.collect_vars(&mut out));
        out
    }

    pub fn constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        for lit in &self.literals {
            lit.args.iter().for_each(|t| t.collect_constants(&mut out));
        }
        out
    }

    pub fn rename_vars(&self, map: &BTreeMap<String, String>) -> Clause {
        Clause::new(self.literals.iter().map(|l| l.rename_vars(map)).collect(), self.origin)
    }

    /// Unit clause with every sign flipped. Only meaningful for ground units.
    pub fn negated_unit(&self, origin: Origin) -> Option<Clause> {
        match self.literals.as_slice() {
            [lit] => Some(Clause::unit(lit.negated(), origin)),
            _ => None,
        }
    }

    /// ASCII rendering: literals joined by ` | `, `_|_` for the empty clause.
    pub fn to_ascii(&self) -> String {
        if self.is_empty() {
            return "_|_".to_string();
        }
        self.literals.iter().map(Literal::to_string).collect::<Vec<_>>().join(" | ")
    }
}

impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.literals.len() == other.literals.len()
            && self.literals.iter().all(|l| other.literals.contains(l))
            && other.literals.iter().all(|l| self.literals.contains(l))
    }
}

impl Eq for Clause {}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.alternate() {
            return f.write_str(&self.to_ascii());
        }
        if self.is_empty() {
            return f.write_str("⊥");
        }
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∨ ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

/// True iff some bijective variable renaming maps `a`'s literal multiset onto `b`'s.
pub fn clause_equal_mod_renaming(a: &Clause, b: &Clause) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    match_literals(a.literals(), b.literals(), 0, &mut used, &mut forward, &mut backward)
}

fn match_literals(
    a: &[Literal],
    b: &[Literal],
    i: usize,
    used: &mut [bool],
    forward: &mut BTreeMap<String, String>,
    backward: &mut BTreeMap<String, String>,
) -> bool {
    if i == a.len() {
        return true;
    }
    for j in 0..b.len() {
        if used[j] || a[i].predicate != b[j].predicate || a[i].sign != b[j].sign || a[i].arity() != b[j].arity() {
            continue;
        }
        let (saved_f, saved_b) = (forward.clone(), backward.clone());
        let ok = a[i]
            .args
            .iter()
            .zip(&b[j].args)
            .all(|(s, t)| match_terms(s, t, forward, backward));
        if ok {
            used[j] = true;
            if match_literals(a, b, i + 1, used, forward, backward) {
                return true;
            }
            used[j] = false;
        }
        *forward = saved_f;
        *backward = saved_b;
    }
    false
}

fn match_terms(
    s: &Term,
    t: &Term,
    forward: &mut BTreeMap<String, String>,
    backward: &mut BTreeMap<String, String>,
) -> bool {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) => {
            match (forward.get(x), backward.get(y)) {
                (Some(fy), Some(bx)) => fy == y && bx == x,
                (None, None) => {
                    forward.insert(x.clone(), y.clone());
                    backward.insert(y.clone(), x.clone());
                    true
                }
                _ => false,
            }
        }
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::Func(f, xs), Term::Func(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_terms(x, y, forward, backward))
        }
        _ => false,
    }
}

/// First-order formula over [`Literal`] atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Literal),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(lit: Literal) -> Self {
        Formula::Atom(lit)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Formula, b: Formula) -> Self {
        Formula::Xor(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForAll(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::Atom(lit) => {
                let mut vars = Vec::new();
                lit.collect_vars(&mut vars);
                for v in vars {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Xor(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Constants and function symbols appearing anywhere in the formula.
    pub fn constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |lit| lit.args.iter().for_each(|t| t.collect_constants(&mut out)));
        out
    }

    pub fn visit_atoms(&self, visit: &mut impl FnMut(&Literal)) {
        match self {
            Formula::Atom(lit) => visit(lit),
            Formula::Not(a) => a.visit_atoms(visit),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Xor(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
            Formula::ForAll(_, body) | Formula::Exists(_, body) => body.visit_atoms(visit),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Xor(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::ForAll(..) | Formula::Exists(..) => false,
        }
    }
}

/// The four-valued answer for a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Answer {
    #[serde(alias = "true")]
    True,
    #[serde(alias = "false")]
    False,
    #[serde(alias = "unknown")]
    Unknown,
    #[serde(alias = "Self-Contradictory", alias = "Self-contradictory", alias = "self-contradictory")]
    SelfContradictory,
}

impl Answer {
    pub const ALL: [Answer; 4] = [Answer::True, Answer::False, Answer::Unknown, Answer::SelfContradictory];

    pub fn parse(s: &str) -> Option<Answer> {
        match s.trim() {
            "True" | "true" => Some(Answer::True),
            "False" | "false" => Some(Answer::False),
            "Unknown" | "unknown" => Some(Answer::Unknown),
            "SelfContradictory" | "Self-Contradictory" | "Self-contradictory" | "self-contradictory" => {
                Some(Answer::SelfContradictory)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::True => "True",
            Answer::False => "False",
            Answer::Unknown => "Unknown",
            Answer::SelfContradictory => "SelfContradictory",
        })
    }
}

/// Which refutation a reasoning path attempts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathKind {
    /// Starts from the query; a contradiction shows the premises entail its negation.
    FromS,
    /// Starts from the negated query; a contradiction shows the premises entail it.
    FromNegS,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Entailment {
    Entails,
    NotEntails,
}

/// Outcome of one reasoning path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Determination {
    pub path: PathKind,
    pub outcome: Entailment,
}

impl Determination {
    pub fn new(path: PathKind, outcome: Entailment) -> Self {
        Determination { path, outcome }
    }

    pub fn entails(&self) -> bool {
        self.outcome == Entailment::Entails
    }

    /// The claim in `P ⊢ S` notation.
    pub fn claim(&self) -> &'static str {
        match (self.path, self.outcome) {
            (PathKind::FromS, Entailment::Entails) => "P ⊢ ¬S",
            (PathKind::FromS, Entailment::NotEntails) => "P ⊬ ¬S",
            (PathKind::FromNegS, Entailment::Entails) => "P ⊢ S",
            (PathKind::FromNegS, Entailment::NotEntails) => "P ⊬ S",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Term {
        Term::constant(n)
    }
    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn marker_true_is_positive() {
        let lit = canonicalize_literal("Smart", vec![c("Dave"), c("True")], 0).unwrap();
        assert_eq!(lit, Literal::positive("Smart", vec![c("Dave")]));
    }

    #[test]
    fn marker_false_is_negative() {
        let lit = canonicalize_literal("Nice", vec![c("Dave"), c("False")], 0).unwrap();
        assert_eq!(lit, Literal::negative("Nice", vec![c("Dave")]));
    }

    #[test]
    fn outer_negation_cancels_false_marker() {
        let lit = canonicalize_literal("P", vec![v("x"), c("False")], 1).unwrap();
        assert_eq!(lit, Literal::positive("P", vec![v("x")]));
        let lit = canonicalize_literal("P", vec![v("x")], 2).unwrap();
        assert_eq!(lit.sign, Sign::Positive);
    }

    #[test]
    fn marker_in_middle_is_malformed() {
        let err = canonicalize_literal("P", vec![c("True"), c("Dave")], 0).unwrap_err();
        assert_eq!(err, AstError::MalformedLiteral { predicate: "P".into(), position: 0 });
    }

    #[test]
    fn renaming_examples() {
        let px = Clause::unit(Literal::positive("P", vec![v("x")]), Origin::Query);
        let py = Clause::unit(Literal::positive("P", vec![v("y")]), Origin::Query);
        assert!(clause_equal_mod_renaming(&px, &py));

        let shared = Clause::new(
            vec![Literal::positive("P", vec![v("x")]), Literal::negative("Q", vec![v("x")])],
            Origin::Query,
        );
        let split = Clause::new(
            vec![Literal::positive("P", vec![v("x")]), Literal::negative("Q", vec![v("y")])],
            Origin::Query,
        );
        assert!(!clause_equal_mod_renaming(&shared, &split));
        assert!(!clause_equal_mod_renaming(&split, &shared));

        let e1 = Clause::empty(Origin::Query);
        let e2 = Clause::empty(Origin::Derived(3));
        assert!(clause_equal_mod_renaming(&e1, &e2));
        assert!(!clause_equal_mod_renaming(&e1, &px));
    }

    #[test]
    fn renaming_must_be_bijective() {
        let two = Clause::unit(Literal::positive("R", vec![v("x"), v("y")]), Origin::Query);
        let one = Clause::unit(Literal::positive("R", vec![v("z"), v("z")]), Origin::Query);
        assert!(!clause_equal_mod_renaming(&two, &one));
        assert!(!clause_equal_mod_renaming(&one, &two));
    }

    #[test]
    fn renaming_ignores_literal_order() {
        let a = Clause::new(
            vec![Literal::positive("P", vec![v("x")]), Literal::negative("Q", vec![v("y")])],
            Origin::Query,
        );
        let b = Clause::new(
            vec![Literal::negative("Q", vec![v("u")]), Literal::positive("P", vec![v("w")])],
            Origin::Query,
        );
        assert!(clause_equal_mod_renaming(&a, &b));
    }

    #[test]
    fn clause_rendering() {
        let cl = Clause::new(
            vec![Literal::negative("Green", vec![v("x")]), Literal::positive("Nice", vec![v("x")])],
            Origin::Premise(1),
        );
        assert_eq!(cl.to_string(), "Green(x, False) ∨ Nice(x, True)");
        assert_eq!(format!("{cl:#}"), "Green(x, False) | Nice(x, True)");
        assert_eq!(Clause::empty(Origin::Query).to_string(), "⊥");
    }

    #[test]
    fn duplicate_literals_are_merged() {
        let lit = Literal::positive("P", vec![c("A")]);
        let cl = Clause::new(vec![lit.clone(), lit.clone()], Origin::Query);
        assert_eq!(cl.len(), 1);
    }

    #[test]
    fn tautology_detection() {
        let cl = Clause::new(
            vec![Literal::positive("P", vec![v("x")]), Literal::negative("P", vec![v("x")])],
            Origin::Query,
        );
        assert!(cl.is_tautology());
        let cl = Clause::new(
            vec![Literal::positive("P", vec![v("x")]), Literal::negative("P", vec![v("y")])],
            Origin::Query,
        );
        assert!(!cl.is_tautology());
    }
}
