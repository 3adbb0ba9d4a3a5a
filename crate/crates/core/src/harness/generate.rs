//! Seeded generator for small function-free problems with oracle labels.
//!
//! Most problems are rule chains: a fact about one constant, `depth` rules
//! carrying it along a chain of predicates, and a query about the last
//! predicate. Unknown variants break the chain. Noise clauses stay off the
//! chain for the queried constant. A configurable share of problems are
//! unstructured random clause sets instead.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Problem;
use crate::ast::{Answer, Clause, Formula, Literal, Origin, Sign, Term};
use crate::oracle::{self, DEFAULT_ATOM_CAP};
use crate::parser::render;

const CONSTANTS: [&str; 6] = ["Anne", "Bob", "Carol", "Dave", "Erin", "Fiona"];
const PREDICATES: [&str; 12] =
    ["Red", "Big", "Cold", "Kind", "Nice", "Quiet", "Rough", "Smart", "Young", "Furry", "Green", "White"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub problems: usize,
    pub constants: usize,
    pub predicates: usize,
    /// Upper bound on premises per problem.
    pub clauses: usize,
    /// Rules on the chain; capped by `clauses - 1` and `predicates - 1`.
    pub depth: usize,
    /// Share of unstructured random problems, 0 to 100.
    pub unstructured_percent: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { problems: 100, constants: 3, predicates: 5, clauses: 8, depth: 2, unstructured_percent: 25 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("constants must be between 1 and {}", CONSTANTS.len())]
    Constants,
    #[error("predicates must be between 1 and {}", PREDICATES.len())]
    Predicates,
    #[error("clauses must be at least 1")]
    Clauses,
    #[error("{predicates} predicates over {constants} constants exceed the oracle's {cap}-atom cap")]
    AtomCap { predicates: usize, constants: usize, cap: usize },
    #[error("unstructured_percent must be at most 100")]
    Percent,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenError> {
        if !(1..=CONSTANTS.len()).contains(&self.constants) {
            return Err(GenError::Constants);
        }
        if !(1..=PREDICATES.len()).contains(&self.predicates) {
            return Err(GenError::Predicates);
        }
        if self.clauses == 0 {
            return Err(GenError::Clauses);
        }
        if self.unstructured_percent > 100 {
            return Err(GenError::Percent);
        }
        if self.predicates * self.constants > DEFAULT_ATOM_CAP {
            return Err(GenError::AtomCap {
                predicates: self.predicates,
                constants: self.constants,
                cap: DEFAULT_ATOM_CAP,
            });
        }
        Ok(())
    }

    fn effective_depth(&self) -> usize {
        self.depth.min(self.clauses - 1).min(self.predicates - 1)
    }
}

fn lit(pred: &str, arg: Term, sign: Sign) -> Literal {
    Literal::new(pred, vec![arg], sign)
}

fn random_sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// `∀x ∀y (l1 ∨ l2 …)` with literals in order.
fn clause_formula(c: &Clause) -> Formula {
    let mut lits = c.literals().iter().cloned().map(Formula::Atom);
    let first = lits.next().expect("generated clauses are nonempty");
    let body = lits.fold(first, Formula::or);
    c.variables().into_iter().rev().fold(body, |f, v| Formula::forall(v, f))
}

struct Draft {
    premises: Vec<Clause>,
    query: Literal,
    depth: Option<usize>,
}

fn chain_problem(rng: &mut ChaCha8Rng, params: &GenParams, preds: &[&str], consts: &[&str]) -> Draft {
    let depth = params.effective_depth();
    let (chain, noise) = preds.split_at(depth + 1);
    let x = || Term::var("x");
    let target = *consts.choose(rng).unwrap();
    let others: Vec<&str> = consts.iter().copied().filter(|c| *c != target).collect();
    let signs: Vec<Sign> = (0..=depth).map(|_| random_sign(rng)).collect();

    let mut label = *[Answer::True, Answer::False, Answer::Unknown].choose(rng).unwrap();
    #[derive(Clone, Copy)]
    enum Break {
        OtherConstant,
        DropRule,
        NoiseFact,
    }
    let mut breaks = Vec::new();
    if !others.is_empty() {
        breaks.push(Break::OtherConstant);
    }
    if depth >= 1 {
        breaks.push(Break::DropRule);
    }
    if !noise.is_empty() {
        breaks.push(Break::NoiseFact);
    }
    let broken = if label == Answer::Unknown {
        match breaks.choose(rng) {
            Some(b) => Some(*b),
            None => {
                label = if rng.gen_bool(0.5) { Answer::True } else { Answer::False };
                None
            }
        }
    } else {
        None
    };

    let mut premises = Vec::new();
    let mut side_facts = Vec::new();
    let dropped = match broken {
        Some(Break::DropRule) => Some(rng.gen_range(0..depth)),
        _ => None,
    };
    for i in 0..depth {
        if Some(i) == dropped {
            continue;
        }
        let mut lits = vec![lit(chain[i], x(), signs[i].flip())];
        if depth >= 2 && !noise.is_empty() && premises.len() + side_facts.len() + 2 < params.clauses && rng.gen_bool(0.25) {
            let q = *noise.choose(rng).unwrap();
            let s = random_sign(rng);
            lits.push(lit(q, x(), s.flip()));
            side_facts.push(lit(q, Term::constant(target), s));
        }
        lits.push(lit(chain[i + 1], x(), signs[i + 1]));
        premises.push(Clause::new(lits, Origin::Premise(0)));
    }
    let fact = match broken {
        Some(Break::OtherConstant) => lit(chain[0], Term::constant(*others.choose(rng).unwrap()), signs[0]),
        Some(Break::NoiseFact) => lit(noise.choose(rng).unwrap(), Term::constant(target), random_sign(rng)),
        _ => lit(chain[0], Term::constant(target), signs[0]),
    };
    premises.push(Clause::unit(fact, Origin::Premise(0)));
    premises.extend(side_facts.into_iter().map(|l| Clause::unit(l, Origin::Premise(0))));

    let query_sign = match label {
        Answer::True => signs[depth],
        Answer::False => signs[depth].flip(),
        _ => random_sign(rng),
    };
    let query = lit(chain[depth], Term::constant(target), query_sign);

    // noise: rules among noise predicates, facts that avoid the chain for the target
    let mut attempts = 0;
    while premises.len() < params.clauses && attempts < 4 * params.clauses {
        attempts += 1;
        let noise_rule = noise.len() >= 2 && rng.gen_bool(0.5);
        let clause = if noise_rule {
            let picked: Vec<&str> = noise.choose_multiple(rng, 2.min(noise.len())).copied().collect();
            let mut lits = vec![lit(picked[0], x(), random_sign(rng)), lit(picked[1], x(), random_sign(rng))];
            if noise.len() >= 3 && rng.gen_bool(0.3) {
                let third = noise.iter().find(|p| !picked.contains(p)).unwrap();
                lits.push(lit(third, x(), random_sign(rng)));
            }
            Clause::new(lits, Origin::Premise(0))
        } else if !noise.is_empty() && (others.is_empty() || rng.gen_bool(0.5)) {
            let c = *consts.choose(rng).unwrap();
            Clause::unit(lit(noise.choose(rng).unwrap(), Term::constant(c), random_sign(rng)), Origin::Premise(0))
        } else if !others.is_empty() {
            let c = *others.choose(rng).unwrap();
            Clause::unit(lit(chain.choose(rng).unwrap(), Term::constant(c), random_sign(rng)), Origin::Premise(0))
        } else {
            break;
        };
        if clause.is_tautology() || premises.contains(&clause) {
            continue;
        }
        premises.push(clause);
    }
    premises.shuffle(rng);
    Draft { premises, query, depth: Some(depth) }
}

fn unstructured_problem(rng: &mut ChaCha8Rng, params: &GenParams, preds: &[&str], consts: &[&str]) -> Draft {
    let n = rng.gen_range(1..=params.clauses);
    let mut premises: Vec<Clause> = Vec::new();
    while premises.len() < n {
        let width = rng.gen_range(1..=3);
        let lits = (0..width)
            .map(|_| {
                let arg = match rng.gen_range(0..4) {
                    0 => Term::var("x"),
                    1 => Term::var("y"),
                    _ => Term::constant(*consts.choose(rng).unwrap()),
                };
                lit(preds.choose(rng).unwrap(), arg, random_sign(rng))
            })
            .collect();
        let clause = Clause::new(lits, Origin::Premise(0));
        if !clause.is_tautology() && !premises.contains(&clause) {
            premises.push(clause);
        }
    }
    let query = lit(preds.choose(rng).unwrap(), Term::constant(*consts.choose(rng).unwrap()), random_sign(rng));
    Draft { premises, query, depth: None }
}

/// Reproducible suite of `params.problems` problems labelled by the oracle.
///
/// Inconsistent premise sets are redrawn, so SelfContradictory never occurs.
pub fn generate_suite(seed: u64, params: &GenParams) -> Result<Vec<Problem>, GenError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(params.problems);
    while out.len() < params.problems {
        let chain_len = params.effective_depth() + 1;
        let n_preds = params.predicates.max(chain_len);
        let preds: Vec<&str> = PREDICATES.choose_multiple(&mut rng, n_preds).copied().collect();
        let consts: Vec<&str> = CONSTANTS[..params.constants].to_vec();
        let unstructured = rng.gen_range(0..100) < params.unstructured_percent;
        let draft = if unstructured {
            unstructured_problem(&mut rng, params, &preds, &consts)
        } else {
            chain_problem(&mut rng, params, &preds, &consts)
        };
        let constants: Vec<String> = consts.iter().map(|c| c.to_string()).collect();
        let consistent = oracle::satisfiable(&draft.premises, &constants).expect("generator stays within oracle caps");
        if !consistent {
            continue;
        }
        let query = Clause::unit(draft.query.clone(), Origin::Query);
        let label = oracle::oracle_answer(&draft.premises, &query, &constants).expect("generator stays within oracle caps");
        out.push(Problem {
            id: format!("gen-{seed}-{:04}", out.len()),
            premises: draft.premises.iter().map(|c| render(&clause_formula(c))).collect(),
            query: render(&Formula::Atom(draft.query)),
            label,
            dialect: None,
            nl: false,
            depth: draft.depth,
            dataset: Some("generated".to_string()),
        });
    }
    Ok(out)
}
