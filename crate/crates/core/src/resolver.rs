//! Unification and binary resolution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ast::{Clause, Literal, Origin, Term};
use crate::search::Candidate;

/// Variable bindings. Kept idempotent: no bound variable occurs in any binding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.bindings.get(v) {
                Some(bound) => self.apply_term(bound),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| self.apply_term(a)).collect()),
        }
    }

    pub fn apply_literal(&self, lit: &Literal) -> Literal {
        Literal {
            predicate: lit.predicate.clone(),
            args: lit.args.iter().map(|t| self.apply_term(t)).collect(),
            sign: lit.sign,
        }
    }

    pub fn apply_clause(&self, clause: &Clause) -> Clause {
        Clause::new(clause.literals().iter().map(|l| self.apply_literal(l)).collect(), clause.origin)
    }

    /// Bindings as rendered strings, for traces.
    pub fn to_string_map(&self) -> BTreeMap<String, String> {
        self.bindings.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
    }

    fn walk<'a>(&'a self, t: &'a Term) -> &'a Term {
        match t {
            Term::Var(v) => match self.bindings.get(v) {
                Some(bound) => self.walk(bound),
                None => t,
            },
            _ => t,
        }
    }

    fn occurs(&self, var: &str, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(v) => v == var,
            Term::Const(_) => false,
            Term::Func(_, args) => args.iter().any(|a| self.occurs(var, a)),
        }
    }

    fn unify_terms(&mut self, s: &Term, t: &Term) -> bool {
        let s = self.walk(s).clone();
        let t = self.walk(t).clone();
        match (&s, &t) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            // right-hand variables are bound first so left-hand names survive
            (_, Term::Var(y)) => {
                if self.occurs(y, &s) {
                    return false;
                }
                self.bindings.insert(y.clone(), s);
                true
            }
            (Term::Var(x), _) => {
                if self.occurs(x, &t) {
                    return false;
                }
                self.bindings.insert(x.clone(), t);
                true
            }
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::Func(f, xs), Term::Func(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify_terms(x, y))
            }
            _ => false,
        }
    }

    fn normalized(self) -> Substitution {
        let bindings = self.bindings.iter().map(|(k, v)| (k.clone(), self.apply_term(v))).collect();
        Substitution { bindings }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}↦{v}")?;
        }
        f.write_str("}")
    }
}

/// Most general unifier of two argument lists, with occurs check.
pub fn unify(a: &[Term], b: &[Term]) -> Option<Substitution> {
    if a.len() != b.len() {
        return None;
    }
    let mut sub = Substitution::new();
    for (s, t) in a.iter().zip(b) {
        if !sub.unify_terms(s, t) {
            return None;
        }
    }
    Some(sub.normalized())
}

/// Renames the variables of `b` that also occur in `a`.
///
/// A clashing `x` becomes `x1`, `x2`, … (trailing digits of the original name
/// are dropped first), picking the first name unused by either clause.
pub fn standardize_apart(a: &Clause, b: &Clause) -> (Clause, Clause) {
    let a_vars: BTreeSet<String> = a.variables().into_iter().collect();
    let b_vars = b.variables();
    if !b_vars.iter().any(|v| a_vars.contains(v)) {
        return (a.clone(), b.clone());
    }
    let mut taken: BTreeSet<String> = a_vars.iter().cloned().chain(b_vars.iter().cloned()).collect();
    let mut map = BTreeMap::new();
    for v in b_vars.iter().filter(|v| a_vars.contains(*v)) {
        let base = v.trim_end_matches(|c: char| c.is_ascii_digit());
        let base = if base.is_empty() { v.as_str() } else { base };
        let fresh = (1..).map(|k| format!("{base}{k}")).find(|n| !taken.contains(n)).expect("unbounded range");
        taken.insert(fresh.clone());
        map.insert(v.clone(), fresh);
    }
    (a.clone(), b.rename_vars(&map))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("illegal resolution pair: {0}")]
    IllegalPair(String),
}

/// Result of one binary resolution step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    /// The empty clause.
    Contradiction,
    /// Resolvent containing a literal together with its complement.
    Tautology(Clause),
    Resolvent(Clause),
}

/// Resolves `current` on literal `pivot` against `other` on literal `other_pivot`.
///
/// `other` must already be standardized apart from `current`. The unifier is
/// recomputed here, so a stale or wrong pairing is reported rather than
/// silently producing an unsound clause.
pub fn resolve_on(
    current: &Clause,
    pivot: usize,
    other: &Clause,
    other_pivot: usize,
    origin: Origin,
) -> Result<(Resolution, Substitution), ResolveError> {
    let (Some(l1), Some(l2)) = (current.literals().get(pivot), other.literals().get(other_pivot)) else {
        return Err(ResolveError::IllegalPair("literal position out of range".into()));
    };
    if l1.predicate != l2.predicate || l1.arity() != l2.arity() {
        return Err(ResolveError::IllegalPair(format!("{l1} and {l2} have different predicates")));
    }
    if l1.sign == l2.sign {
        return Err(ResolveError::IllegalPair(format!("{l1} and {l2} have the same sign")));
    }
    let mgu = unify(&l1.args, &l2.args)
        .ok_or_else(|| ResolveError::IllegalPair(format!("{l1} and {l2} do not unify")))?;
    let rest = current
        .literals()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pivot)
        .chain(other.literals().iter().enumerate().filter(|(i, _)| *i != other_pivot))
        .map(|(_, l)| mgu.apply_literal(l))
        .collect::<Vec<_>>();
    let clause = Clause::new(rest, origin);
    let outcome = if clause.is_empty() {
        Resolution::Contradiction
    } else if clause.is_tautology() {
        Resolution::Tautology(clause)
    } else {
        Resolution::Resolvent(clause)
    };
    Ok((outcome, mgu))
}

/// Resolves the current clause against a search candidate.
pub fn resolve(current: &Clause, cand: &Candidate, origin: Origin) -> Result<Resolution, ResolveError> {
    resolve_on(current, cand.current_pos, &cand.clause, cand.complement_pos, origin).map(|(r, _)| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::ast::Formula;

    fn v(n: &str) -> Term {
        Term::var(n)
    }
    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    /// Clause from a disjunction of literals written in the grammar.
    fn clause(text: &str) -> Clause {
        fn collect(f: Formula, out: &mut Vec<Literal>) {
            match f {
                Formula::ForAll(_, b) => collect(*b, out),
                Formula::Or(a, b) => {
                    collect(*a, out);
                    collect(*b, out);
                }
                Formula::Atom(l) => out.push(l),
                Formula::Not(inner) => match *inner {
                    Formula::Atom(l) => out.push(l.negated()),
                    other => panic!("not a literal: {other:?}"),
                },
                other => panic!("not a clause: {other:?}"),
            }
        }
        let mut lits = Vec::new();
        collect(parse_formula(text).unwrap(), &mut lits);
        Clause::new(lits, Origin::Premise(1))
    }

    #[test]
    fn unify_examples() {
        let s = unify(&[v("x")], &[c("Dave")]).unwrap();
        assert_eq!(s.get("x"), Some(&c("Dave")));
        assert!(unify(&[c("Dave")], &[c("Dave")]).unwrap().is_empty());
        assert!(unify(&[v("x")], &[Term::Func("f".into(), vec![v("x")])]).is_none());
        assert!(unify(&[c("A")], &[c("B")]).is_none());
    }

    #[test]
    fn unifier_is_idempotent() {
        let s = unify(&[v("x"), v("y")], &[v("y"), c("A")]).unwrap();
        for (_, t) in s.iter() {
            assert_eq!(s.apply_term(t), *t);
        }
        assert_eq!(s.apply_term(&v("x")), c("A"));
    }

    #[test]
    fn standardize_apart_renames_only_clashes() {
        let a = clause("Known(x, False)");
        let b = clause("Difficult(x, False) ∨ Embarrassed(x, True)");
        let (a2, b2) = standardize_apart(&a, &b);
        assert_eq!(a2, a);
        assert_eq!(b2.variables(), vec!["x1".to_string()]);

        let g = clause("Smart(Gary, True)");
        assert_eq!(standardize_apart(&g, &b).1, b);

        let (s1, s2) = standardize_apart(&b, &b);
        let v1: BTreeSet<_> = s1.variables().into_iter().collect();
        assert!(s2.variables().iter().all(|v| !v1.contains(v)));
    }

    #[test]
    fn bradley_resolution() {
        let current = clause("Difficult(Bradley, True) ∨ Known(x, False)");
        let comp = clause("Difficult(x, False) ∨ Embarrassed(x, True) ∨ Colorful(x, False)");
        let (cur, comp) = standardize_apart(&current, &comp);
        let (res, _) = resolve_on(&cur, 0, &comp, 0, Origin::Derived(1)).unwrap();
        let expected = clause("Known(x, False) ∨ Embarrassed(Bradley, True) ∨ Colorful(Bradley, False)");
        match res {
            Resolution::Resolvent(r) => {
                assert_eq!(r, expected);
                assert_eq!(r.to_string(), expected.to_string());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn instantiation_stays_general() {
        let current = clause("Smart(Gary, False)");
        let comp = clause("Smart(Gary, True) ∨ Nice(x, False)");
        let (res, mgu) = resolve_on(&current, 0, &comp, 0, Origin::Derived(1)).unwrap();
        assert!(mgu.is_empty());
        assert_eq!(res, Resolution::Resolvent(Clause::unit(Literal::negative("Nice", vec![v("x")]), Origin::Derived(1))));
    }

    #[test]
    fn unit_clash_is_contradiction() {
        let (res, _) =
            resolve_on(&clause("Smart(Dave, False)"), 0, &clause("Smart(Dave, True)"), 0, Origin::Derived(3)).unwrap();
        assert_eq!(res, Resolution::Contradiction);
    }

    #[test]
    fn tautological_resolvent_is_flagged() {
        let (res, _) =
            resolve_on(&clause("A ∨ B"), 0, &clause("¬A ∨ ¬B"), 0, Origin::Derived(1)).unwrap();
        assert!(matches!(res, Resolution::Tautology(_)));
    }

    #[test]
    fn illegal_pairs_are_rejected() {
        let a = clause("P(A)");
        assert!(matches!(resolve_on(&a, 0, &clause("P(A)"), 0, Origin::Derived(1)), Err(ResolveError::IllegalPair(_))));
        assert!(matches!(resolve_on(&a, 0, &clause("¬Q(A)"), 0, Origin::Derived(1)), Err(ResolveError::IllegalPair(_))));
        assert!(matches!(resolve_on(&a, 0, &clause("¬P(B)"), 0, Origin::Derived(1)), Err(ResolveError::IllegalPair(_))));
    }

    #[test]
    fn duplicate_literals_merge() {
        let (res, _) = resolve_on(&clause("P(A) ∨ Q(A)"), 0, &clause("¬P(x) ∨ Q(x)"), 0, Origin::Derived(1)).unwrap();
        assert_eq!(res, Resolution::Resolvent(clause("Q(A)")));
    }
}
