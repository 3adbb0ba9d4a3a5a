mod common;

use std::collections::{BTreeMap, BTreeSet};

use dualproof::ast::{clause_equal_mod_renaming, Answer, Clause, Literal, Origin};
use dualproof::engine::{solve, EngineConfig, Termination};
use dualproof::harness::{generate_suite, run_benchmark, BenchConfig, GenParams};
use dualproof::oracle::satisfiable;
use dualproof::parser::{close_universally, parse_formula, parse_problem, render};
use dualproof::resolver::{resolve_on, standardize_apart, unify, Resolution};
use dualproof::search::{find_complements, ClauseIndex};
use proptest::prelude::*;

fn renamed(c: &Clause) -> Clause {
    let map: BTreeMap<String, String> = c.variables().into_iter().map(|v| (v.clone(), format!("{v}_r"))).collect();
    c.rename_vars(&map)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn renaming_is_an_equivalence(a in common::clause(), b in common::clause()) {
        prop_assert!(clause_equal_mod_renaming(&a, &a));
        prop_assert!(clause_equal_mod_renaming(&a, &renamed(&a)));
        prop_assert_eq!(clause_equal_mod_renaming(&a, &b), clause_equal_mod_renaming(&b, &a));
        let r = renamed(&b);
        if clause_equal_mod_renaming(&a, &b) {
            prop_assert!(clause_equal_mod_renaming(&a, &r));
        }
    }

    #[test]
    fn render_then_parse_is_identity(f in common::first_order_formula()) {
        let closed = close_universally(f);
        let text = render(&closed);
        prop_assert_eq!(parse_formula(&text).unwrap(), closed, "{}", text);
    }

    #[test]
    fn index_matches_linear_scan(premises in prop::collection::vec(common::clause(), 0..8), current in common::clause()) {
        let idx = ClauseIndex::build(&premises);
        let got: BTreeSet<(usize, usize, usize)> = find_complements(&current, &idx)
            .iter()
            .map(|c| (c.origin_rank, c.current_pos, c.complement_pos))
            .collect();
        let mut expected = BTreeSet::new();
        for (rank, stored) in idx.clauses().enumerate() {
            let other = standardize_apart(&current, stored).1;
            for (i, l) in current.literals().iter().enumerate() {
                for (j, m) in other.literals().iter().enumerate() {
                    if l.predicate == m.predicate && l.sign != m.sign && l.args.len() == m.args.len()
                        && unify(&l.args, &m.args).is_some()
                    {
                        expected.insert((rank, i, j));
                    }
                }
            }
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn candidates_are_ordered(premises in prop::collection::vec(common::clause(), 0..8), current in common::clause()) {
        let idx = ClauseIndex::build(&premises);
        let keys: Vec<_> = find_complements(&current, &idx)
            .iter()
            .map(|c| (c.clause_len, c.origin_rank, c.current_pos, c.complement_pos))
            .collect();
        prop_assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn resolvents_are_entailed(a in common::clause(), b in common::clause()) {
        let (a, b) = standardize_apart(&a, &b);
        let constants = vec!["Anne".to_string(), "Bob".to_string(), "Other".to_string()];
        for (i, l) in a.literals().iter().enumerate() {
            for (j, m) in b.literals().iter().enumerate() {
                if !(l.predicate == m.predicate && l.sign != m.sign && l.args.len() == m.args.len()) {
                    continue;
                }
                let Ok((res, _)) = resolve_on(&a, i, &b, j, Origin::Derived(1)) else { continue };
                let resolvent = match res {
                    Resolution::Contradiction => Clause::empty(Origin::Derived(1)),
                    Resolution::Tautology(c) | Resolution::Resolvent(c) => c,
                };
                // {a, b} ⊨ resolvent: no model of a, b falsifies a ground instance of it
                let vars = resolvent.variables();
                let mut choice = vec![0usize; vars.len()];
                loop {
                    let mut premises = vec![a.clone(), b.clone()];
                    for lit in resolvent.literals() {
                        let args = lit.args.iter().map(|t| match t {
                            dualproof::Term::Var(v) => {
                                let k = vars.iter().position(|x| x == v).unwrap();
                                dualproof::Term::constant(constants[choice[k]].clone())
                            }
                            other => other.clone(),
                        }).collect();
                        premises.push(Clause::unit(Literal::new(lit.predicate.clone(), args, lit.sign.flip()), Origin::Query));
                    }
                    prop_assert!(!satisfiable(&premises, &constants).unwrap(), "{} / {} ⊭ {}", a, b, resolvent);
                    let mut k = 0;
                    while k < choice.len() {
                        choice[k] += 1;
                        if choice[k] < constants.len() { break; }
                        choice[k] = 0;
                        k += 1;
                    }
                    if k == choice.len() { break; }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_never_contradicts_oracle(seed in any::<u64>()) {
        let params = GenParams { problems: 10, constants: 3, predicates: 5, clauses: 10, depth: 3, unstructured_percent: 50 };
        for p in generate_suite(seed, &params).unwrap() {
            let parsed = parse_problem(&p.to_source()).unwrap();
            let v = solve(&parsed.premises, &parsed.query, &EngineConfig::default()).unwrap();
            prop_assert!(v.answer == p.label || v.answer == Answer::Unknown, "{}: engine {} oracle {}", p.id, v.answer, p.label);
            // step accounting
            prop_assert_eq!(v.stats.iterations, v.from_s.steps.len() + v.from_neg_s.steps.len());
        }
    }

    #[test]
    fn raising_i_max_keeps_entailments(seed in any::<u64>(), i_max in 1usize..12) {
        let params = GenParams { problems: 6, unstructured_percent: 50, ..Default::default() };
        for p in generate_suite(seed, &params).unwrap() {
            let parsed = parse_problem(&p.to_source()).unwrap();
            let low = solve(&parsed.premises, &parsed.query, &EngineConfig::default().with_i_max(i_max)).unwrap();
            let high = solve(&parsed.premises, &parsed.query, &EngineConfig::default().with_i_max(i_max + 10)).unwrap();
            for (l, h) in low.paths().iter().zip(high.paths()) {
                if l.termination == Termination::Contradiction {
                    prop_assert_eq!(h.termination, Termination::Contradiction, "{}", p.id);
                }
            }
        }
    }

    #[test]
    fn path_order_does_not_matter(seed in any::<u64>()) {
        let params = GenParams { problems: 6, unstructured_percent: 50, ..Default::default() };
        for p in generate_suite(seed, &params).unwrap() {
            let parsed = parse_problem(&p.to_source()).unwrap();
            let seq = solve(&parsed.premises, &parsed.query, &EngineConfig::default()).unwrap();
            let par = solve(&parsed.premises, &parsed.query, &EngineConfig { parallel_paths: true, ..Default::default() }).unwrap();
            prop_assert_eq!(seq.answer, par.answer);
            prop_assert_eq!(seq.from_s.stats, par.from_s.stats);
            prop_assert_eq!(seq.from_neg_s.stats, par.from_neg_s.stats);
        }
    }

    #[test]
    fn report_aggregates_are_recomputable(seed in any::<u64>()) {
        let suite = generate_suite(seed, &GenParams { problems: 15, ..Default::default() }).unwrap();
        let report = run_benchmark(&suite, &BenchConfig { jobs: 2, ..Default::default() }).unwrap();
        let scored: Vec<_> = report.records.iter().filter(|r| r.is_scored()).collect();
        let matches = scored.iter().filter(|r| r.matched).count();
        let steps: usize = scored.iter().map(|r| r.steps).sum();
        prop_assert_eq!(report.aggregates.matches, matches);
        prop_assert!((report.aggregates.accuracy - matches as f64 / scored.len() as f64).abs() < 1e-12);
        prop_assert!((report.aggregates.mean_steps - steps as f64 / scored.len() as f64).abs() < 1e-12);
        prop_assert!(report.records.windows(2).all(|w| w[0].id < w[1].id));
    }
}

