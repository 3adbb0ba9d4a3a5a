//! Clausal normal form: connective elimination, negation normal form,
//! prenexing, skolemization and distribution.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::ast::{clause_equal_mod_renaming, Clause, Formula, Literal, Origin, Sign, Term};
use crate::parser::render;

pub const DEFAULT_CLAUSE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("clause blow-up: CNF expansion produced more than {cap} clauses")]
    ClauseBlowup { cap: usize },
    #[error("query is not a single ground literal: {0}")]
    NonAtomicQuery(String),
}

/// Fresh skolem symbols for one problem: `sk1`, `sk2`, …
///
/// Names already used as constants or function symbols in the problem are
/// never produced; a clash gets a `_k` suffix.
#[derive(Debug, Clone)]
pub struct SkolemCounter {
    next: usize,
    prefix: String,
    reserved: BTreeSet<String>,
}

impl SkolemCounter {
    pub fn new(reserved: impl IntoIterator<Item = String>) -> Self {
        Self::with_prefix("sk", reserved)
    }

    pub fn with_prefix(prefix: impl Into<String>, reserved: impl IntoIterator<Item = String>) -> Self {
        SkolemCounter { next: 1, prefix: prefix.into(), reserved: reserved.into_iter().collect() }
    }

    pub fn fresh(&mut self) -> String {
        let base = format!("{}{}", self.prefix, self.next);
        self.next += 1;
        let name = if self.reserved.contains(&base) {
            (1..).map(|k| format!("{base}_{k}")).find(|n| !self.reserved.contains(n)).expect("unbounded range")
        } else {
            base
        };
        self.reserved.insert(name.clone());
        name
    }
}

/// Rewrites `→`, `↔` and `⊕` in terms of `∧`, `∨` and `¬`.
pub fn eliminate_connectives(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Atom(_) => f.clone(),
        Not(a) => Formula::not(eliminate_connectives(a)),
        And(a, b) => Formula::and(eliminate_connectives(a), eliminate_connectives(b)),
        Or(a, b) => Formula::or(eliminate_connectives(a), eliminate_connectives(b)),
        Implies(a, b) => Formula::or(Formula::not(eliminate_connectives(a)), eliminate_connectives(b)),
        Iff(a, b) => {
            let (a, b) = (eliminate_connectives(a), eliminate_connectives(b));
            Formula::and(Formula::or(Formula::not(a.clone()), b.clone()), Formula::or(a, Formula::not(b)))
        }
        Xor(a, b) => {
            let (a, b) = (eliminate_connectives(a), eliminate_connectives(b));
            Formula::and(Formula::or(a.clone(), b.clone()), Formula::or(Formula::not(a), Formula::not(b)))
        }
        ForAll(v, body) => Formula::forall(v.clone(), eliminate_connectives(body)),
        Exists(v, body) => Formula::exists(v.clone(), eliminate_connectives(body)),
    }
}

/// Pushes negations onto atoms and folds them into literal signs.
///
/// Expects connectives already eliminated; any remaining `→`/`↔`/`⊕` is
/// eliminated first.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, negate: bool) -> Formula {
    use Formula::*;
    match f {
        Atom(lit) => Atom(if negate { lit.negated() } else { lit.clone() }),
        Not(a) => nnf(a, !negate),
        And(a, b) if negate => Formula::or(nnf(a, true), nnf(b, true)),
        And(a, b) => Formula::and(nnf(a, false), nnf(b, false)),
        Or(a, b) if negate => Formula::and(nnf(a, true), nnf(b, true)),
        Or(a, b) => Formula::or(nnf(a, false), nnf(b, false)),
        ForAll(v, body) if negate => Formula::exists(v.clone(), nnf(body, true)),
        ForAll(v, body) => Formula::forall(v.clone(), nnf(body, false)),
        Exists(v, body) if negate => Formula::forall(v.clone(), nnf(body, true)),
        Exists(v, body) => Formula::exists(v.clone(), nnf(body, false)),
        Implies(..) | Iff(..) | Xor(..) => nnf(&eliminate_connectives(f), negate),
    }
}

/// Renames bound variables so that every quantifier binds a distinct name.
pub fn standardize_quantifiers(f: &Formula) -> Formula {
    let mut used: BTreeSet<String> = f.free_vars().into_iter().collect();
    rename_binders(f, &mut used, &mut Vec::new())
}

fn rename_binders(f: &Formula, used: &mut BTreeSet<String>, scope: &mut Vec<(String, String)>) -> Formula {
    use Formula::*;
    match f {
        Atom(lit) => {
            let args = lit.args.iter().map(|t| rename_in_term(t, scope)).collect();
            Atom(Literal::new(lit.predicate.clone(), args, lit.sign))
        }
        Not(a) => Formula::not(rename_binders(a, used, scope)),
        And(a, b) => Formula::and(rename_binders(a, used, scope), rename_binders(b, used, scope)),
        Or(a, b) => Formula::or(rename_binders(a, used, scope), rename_binders(b, used, scope)),
        Implies(a, b) => Formula::implies(rename_binders(a, used, scope), rename_binders(b, used, scope)),
        Iff(a, b) => Formula::iff(rename_binders(a, used, scope), rename_binders(b, used, scope)),
        Xor(a, b) => Formula::xor(rename_binders(a, used, scope), rename_binders(b, used, scope)),
        ForAll(v, body) | Exists(v, body) => {
            let fresh = if used.contains(v) {
                let base = v.trim_end_matches(|c: char| c.is_ascii_digit());
                let base = if base.is_empty() { v.as_str() } else { base };
                (1..).map(|k| format!("{base}{k}")).find(|n| !used.contains(n)).expect("unbounded range")
            } else {
                v.clone()
            };
            used.insert(fresh.clone());
            scope.push((v.clone(), fresh.clone()));
            let body = rename_binders(body, used, scope);
            scope.pop();
            if matches!(f, ForAll(..)) {
                Formula::forall(fresh, body)
            } else {
                Formula::exists(fresh, body)
            }
        }
    }
}

fn rename_in_term(t: &Term, scope: &[(String, String)]) -> Term {
    match t {
        Term::Var(v) => match scope.iter().rev().find(|(old, _)| old == v) {
            Some((_, new)) => Term::Var(new.clone()),
            None => t.clone(),
        },
        Term::Const(_) => t.clone(),
        Term::Func(name, args) => Term::Func(name.clone(), args.iter().map(|a| rename_in_term(a, scope)).collect()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quant {
    All,
    Some,
}

/// Moves all quantifiers of an NNF formula with distinct binders to the front.
///
/// When two subformulas are joined their prefixes are interleaved, preferring
/// whichever side reaches its next existential soonest, so skolem terms pick
/// up as few unrelated universals as the two orders allow.
pub fn prenex(f: &Formula) -> Formula {
    let (prefix, matrix) = pull_quantifiers(f);
    prefix.into_iter().rev().fold(matrix, |acc, (q, v)| match q {
        Quant::All => Formula::forall(v, acc),
        Quant::Some => Formula::exists(v, acc),
    })
}

fn pull_quantifiers(f: &Formula) -> (Vec<(Quant, String)>, Formula) {
    use Formula::*;
    match f {
        ForAll(v, body) | Exists(v, body) => {
            let q = if matches!(f, ForAll(..)) { Quant::All } else { Quant::Some };
            let (mut prefix, matrix) = pull_quantifiers(body);
            prefix.insert(0, (q, v.clone()));
            (prefix, matrix)
        }
        And(a, b) | Or(a, b) => {
            let (pa, ma) = pull_quantifiers(a);
            let (pb, mb) = pull_quantifiers(b);
            let matrix = if matches!(f, And(..)) { Formula::and(ma, mb) } else { Formula::or(ma, mb) };
            (merge_prefixes(pa, pb), matrix)
        }
        Not(a) if matches!(a.as_ref(), Atom(_)) => (Vec::new(), f.clone()),
        Not(_) => pull_quantifiers(&to_nnf(f)),
        Atom(_) => (Vec::new(), f.clone()),
        Implies(..) | Iff(..) | Xor(..) => pull_quantifiers(&to_nnf(f)),
    }
}

fn merge_prefixes(a: Vec<(Quant, String)>, b: Vec<(Quant, String)>) -> Vec<(Quant, String)> {
    fn universals_before_next_existential(side: &[(Quant, String)]) -> usize {
        side.iter().position(|(q, _)| *q == Quant::Some).unwrap_or(usize::MAX)
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = match (a.get(i), b.get(j)) {
            (Some((Quant::Some, _)), _) => true,
            (_, Some((Quant::Some, _))) => false,
            (Some(_), Some(_)) => {
                universals_before_next_existential(&a[i..]) <= universals_before_next_existential(&b[j..])
            }
            (Some(_), None) => true,
            (None, _) => false,
        };
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else {
            out.push(b[j].clone());
            j += 1;
        }
    }
    out
}

/// Prenexes an NNF formula, replaces each existential by a skolem term over
/// the universals before it, and drops the universal prefix.
pub fn skolemize_and_prenex(f: &Formula, sk: &mut SkolemCounter) -> Formula {
    let standardized = standardize_quantifiers(f);
    let (prefix, matrix) = pull_quantifiers(&standardized);
    skolemize_prefix(&prefix, matrix, sk)
}

fn skolemize_prefix(prefix: &[(Quant, String)], matrix: Formula, sk: &mut SkolemCounter) -> Formula {
    let mut universals: Vec<Term> = Vec::new();
    let mut replacements: Vec<(String, Term)> = Vec::new();
    for (q, v) in prefix {
        match q {
            Quant::All => universals.push(Term::Var(v.clone())),
            Quant::Some => {
                let name = sk.fresh();
                let term = if universals.is_empty() { Term::Const(name) } else { Term::Func(name, universals.clone()) };
                replacements.push((v.clone(), term));
            }
        }
    }
    substitute_vars(&matrix, &replacements)
}

fn substitute_vars(f: &Formula, repl: &[(String, Term)]) -> Formula {
    use Formula::*;
    fn in_term(t: &Term, repl: &[(String, Term)]) -> Term {
        match t {
            Term::Var(v) => repl.iter().find(|(n, _)| n == v).map(|(_, t)| t.clone()).unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::Func(n, args) => Term::Func(n.clone(), args.iter().map(|a| in_term(a, repl)).collect()),
        }
    }
    match f {
        Atom(lit) => Atom(Literal::new(lit.predicate.clone(), lit.args.iter().map(|t| in_term(t, repl)).collect(), lit.sign)),
        Not(a) => Formula::not(substitute_vars(a, repl)),
        And(a, b) => Formula::and(substitute_vars(a, repl), substitute_vars(b, repl)),
        Or(a, b) => Formula::or(substitute_vars(a, repl), substitute_vars(b, repl)),
        Implies(a, b) => Formula::implies(substitute_vars(a, repl), substitute_vars(b, repl)),
        Iff(a, b) => Formula::iff(substitute_vars(a, repl), substitute_vars(b, repl)),
        Xor(a, b) => Formula::xor(substitute_vars(a, repl), substitute_vars(b, repl)),
        ForAll(v, body) => Formula::forall(v.clone(), substitute_vars(body, repl)),
        Exists(v, body) => Formula::exists(v.clone(), substitute_vars(body, repl)),
    }
}

/// Distributes `∨` over `∧` in a quantifier-free NNF formula.
///
/// Tautologies and clauses equal up to variable renaming are dropped.
pub fn to_cnf(f: &Formula, origin: Origin, cap: usize) -> Result<Vec<Clause>, DecomposeError> {
    let raw = distribute(f, cap)?;
    let mut out: Vec<Clause> = Vec::with_capacity(raw.len());
    // clauses equal modulo renaming share a shape, so only compare within one
    let mut by_shape: HashMap<Vec<(&str, Sign, usize)>, Vec<usize>> = HashMap::new();
    let clauses: Vec<Clause> = raw.into_iter().map(|lits| Clause::new(lits, origin)).collect();
    for clause in &clauses {
        if clause.is_tautology() {
            continue;
        }
        let mut shape: Vec<_> = clause.literals().iter().map(|l| (l.predicate.as_str(), l.sign, l.arity())).collect();
        shape.sort();
        let bucket = by_shape.entry(shape).or_default();
        if bucket.iter().any(|&i| clause_equal_mod_renaming(&out[i], clause)) {
            continue;
        }
        bucket.push(out.len());
        out.push(clause.clone());
    }
    Ok(out)
}

fn distribute(f: &Formula, cap: usize) -> Result<Vec<Vec<Literal>>, DecomposeError> {
    use Formula::*;
    let clauses = match f {
        Atom(lit) => vec![vec![lit.clone()]],
        And(a, b) => {
            let mut out = ClauseSet::default();
            for c in distribute(a, cap)?.into_iter().chain(distribute(b, cap)?) {
                out.insert(c);
            }
            out.clauses
        }
        Or(a, b) => {
            let (left, right) = (distribute(a, cap)?, distribute(b, cap)?);
            let mut out = ClauseSet::default();
            for l in &left {
                for r in &right {
                    out.insert(l.iter().chain(r).cloned().collect());
                    if out.clauses.len() > cap {
                        return Err(DecomposeError::ClauseBlowup { cap });
                    }
                }
            }
            out.clauses
        }
        Not(a) => match a.as_ref() {
            Atom(lit) => vec![vec![lit.negated()]],
            _ => return distribute(&to_nnf(f), cap),
        },
        Implies(..) | Iff(..) | Xor(..) => return distribute(&to_nnf(f), cap),
        ForAll(_, body) => return distribute(body, cap),
        Exists(..) => unreachable!("to_cnf expects a skolemized formula"),
    };
    if clauses.len() > cap {
        return Err(DecomposeError::ClauseBlowup { cap });
    }
    Ok(clauses)
}

/// Clauses under construction, with literal-level duplicates merged and
/// tautologies and repeated clauses dropped as they arrive.
#[derive(Default)]
struct ClauseSet {
    clauses: Vec<Vec<Literal>>,
    seen: HashSet<Vec<Literal>>,
}

impl ClauseSet {
    fn insert(&mut self, lits: Vec<Literal>) {
        let mut key = lits.clone();
        key.sort();
        key.dedup();
        if key.iter().any(|l| key.binary_search(&l.negated()).is_ok()) || !self.seen.insert(key) {
            return;
        }
        let mut kept: Vec<Literal> = Vec::with_capacity(lits.len());
        for l in lits {
            if !kept.contains(&l) {
                kept.push(l);
            }
        }
        self.clauses.push(kept);
    }
}

/// Intermediate forms of one formula, for `--explain` output.
#[derive(Debug, Clone, Serialize)]
pub struct FormulaStages {
    pub source: String,
    pub eliminated: String,
    pub nnf: String,
    pub prenex: String,
    pub skolemized: String,
    pub clauses: Vec<String>,
}

/// Clause sets produced for a problem.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub premises: Vec<Clause>,
    pub query: Clause,
    pub negated_query: Clause,
    pub stages: Vec<FormulaStages>,
}

#[derive(Debug, Clone, Copy)]
pub struct DecomposeConfig {
    pub clause_cap: usize,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig { clause_cap: DEFAULT_CLAUSE_CAP }
    }
}

fn clausify(
    f: &Formula,
    origin: Origin,
    sk: &mut SkolemCounter,
    cap: usize,
) -> Result<(Vec<Clause>, FormulaStages), DecomposeError> {
    let eliminated = eliminate_connectives(f);
    let nnf = to_nnf(&eliminated);
    let standardized = standardize_quantifiers(&nnf);
    let pnf = prenex(&standardized);
    let skolemized = skolemize_and_prenex(&nnf, sk);
    let clauses = to_cnf(&skolemized, origin, cap)?;
    let stages = FormulaStages {
        source: render(f),
        eliminated: render(&eliminated),
        nnf: render(&nnf),
        prenex: render(&pnf),
        skolemized: render(&skolemized),
        clauses: clauses.iter().map(Clause::to_string).collect(),
    };
    Ok((clauses, stages))
}

/// Clause form of a single formula, with skolem names avoiding its own constants.
pub fn formula_to_clauses(f: &Formula, origin: Origin, cap: usize) -> Result<Vec<Clause>, DecomposeError> {
    let mut sk = SkolemCounter::new(f.constants());
    clausify(f, origin, &mut sk, cap).map(|(clauses, _)| clauses)
}

/// Clausifies premises and query. Premise clauses carry the 1-based index of
/// the formula they came from; the query must reduce to one ground literal.
pub fn decompose(premises: &[Formula], query: &Formula, cfg: DecomposeConfig) -> Result<Decomposition, DecomposeError> {
    let reserved = premises.iter().chain(std::iter::once(query)).flat_map(Formula::constants);
    let mut sk = SkolemCounter::new(reserved);
    let mut clauses = Vec::new();
    let mut stages = Vec::new();
    for (i, f) in premises.iter().enumerate() {
        let (cs, st) = clausify(f, Origin::Premise(i + 1), &mut sk, cfg.clause_cap)?;
        clauses.extend(cs);
        stages.push(st);
        if clauses.len() > cfg.clause_cap {
            return Err(DecomposeError::ClauseBlowup { cap: cfg.clause_cap });
        }
    }
    let (qs, st) = clausify(query, Origin::Query, &mut sk, cfg.clause_cap)?;
    stages.push(st);
    let query_clause = match qs.as_slice() {
        [c] if c.is_unit() && c.is_ground() => c.clone(),
        _ => return Err(DecomposeError::NonAtomicQuery(render(query))),
    };
    let negated_query = query_clause.negated_unit(Origin::NegatedQuery).expect("unit clause");
    Ok(Decomposition { premises: clauses, query: query_clause, negated_query, stages })
}
