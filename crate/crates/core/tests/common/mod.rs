//! Strategies and helpers shared by the integration tests.
#![allow(dead_code)]

use dualproof::ast::{Clause, Formula, Literal, Sign, Term};
use dualproof::oracle::eval_formula;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub const PROP_ATOMS: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Positive), Just(Sign::Negative)]
}

fn combine(inner: BoxedStrategy<Formula>) -> impl Strategy<Value = Formula> {
    prop_oneof![
        inner.clone().prop_map(Formula::not),
        (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
        (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
        (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
        (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
        (inner.clone(), inner).prop_map(|(a, b)| Formula::xor(a, b)),
    ]
}

/// Quantifier-free formulas over at most eight propositional atoms, every
/// connective included.
pub fn propositional_formula() -> impl Strategy<Value = Formula> {
    let atom = (0..PROP_ATOMS.len(), sign()).prop_map(|(i, s)| Formula::Atom(Literal::new(PROP_ATOMS[i], vec![], s)));
    atom.prop_recursive(5, 40, 2, |inner| combine(inner.boxed()))
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
        prop::sample::select(vec!["Anne", "Bob", "C1"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        (prop::sample::select(vec!["f", "g"]), prop::collection::vec(inner, 1..=2))
            .prop_map(|(name, args)| Term::Func(name.to_string(), args))
    })
}

fn first_order_atom() -> impl Strategy<Value = Formula> {
    (prop::sample::select(vec!["P", "Q", "Rel", "Green"]), prop::collection::vec(term(), 0..=3), sign())
        .prop_map(|(p, args, s)| Formula::Atom(Literal::new(p, args, s)))
}

/// First-order formulas with quantifiers and function terms; free variables
/// are left for the caller to close.
pub fn first_order_formula() -> impl Strategy<Value = Formula> {
    first_order_atom().prop_recursive(4, 32, 2, |inner| {
        let inner = inner.boxed();
        prop_oneof![
            4 => combine(inner.clone()),
            1 => (prop::sample::select(vec!["x", "y", "z"]), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
            1 => (prop::sample::select(vec!["x", "y", "z"]), inner).prop_map(|(v, b)| Formula::exists(v, b)),
        ]
    })
}

/// Function-free clauses over unary and binary predicates.
pub fn clause() -> impl Strategy<Value = Clause> {
    let arg = prop_oneof![
        prop::sample::select(vec!["x", "y"]).prop_map(Term::var),
        prop::sample::select(vec!["Anne", "Bob"]).prop_map(Term::constant),
    ];
    let lit = (prop::sample::select(vec![("P", 1usize), ("Q", 1), ("R", 2)]), prop::collection::vec(arg, 2), sign())
        .prop_map(|((p, arity), mut args, s)| {
            args.truncate(arity);
            Literal::new(p, args, s)
        });
    prop::collection::vec(lit, 1..=3).prop_map(|lits| Clause::new(lits, dualproof::Origin::Premise(1)))
}

/// Draws `n` values from `strategy` with a fixed seed.
pub fn sample<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..n).map(|_| strategy.new_tree(&mut runner).expect("strategy yields a value").current()).collect()
}

/// Whether `clauses` agree with `f` under every assignment of [`PROP_ATOMS`].
pub fn truth_table_equivalent(f: &Formula, clauses: &[Clause]) -> bool {
    let index = |l: &Literal| PROP_ATOMS.iter().position(|a| *a == l.predicate).expect("known atom");
    (0u32..1 << PROP_ATOMS.len()).all(|model| {
        let value = |l: &Literal| model & (1 << index(l)) != 0;
        let expected = eval_formula(f, &[], &mut |l| value(l));
        let actual = clauses.iter().all(|c| {
            c.literals().iter().any(|l| match l.sign {
                Sign::Positive => value(l),
                Sign::Negative => !value(l),
            })
        });
        expected == actual
    })
}
