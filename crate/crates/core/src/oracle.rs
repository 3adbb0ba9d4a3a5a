//! Brute-force entailment by grounding and enumerating every truth assignment.
//!
//! Only function-free clause sets are supported. The atom count is capped so
//! that `2^n` enumeration stays instant.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ast::{Answer, Clause, Formula, Literal, Sign, Term};

pub const DEFAULT_ATOM_CAP: usize = 24;
/// Constant used when a problem mentions none.
pub const DUMMY_CONSTANT: &str = "C0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("grounding needs {atoms} atoms, above the cap of {cap}")]
    AtomCapExceeded { atoms: usize, cap: usize },
    #[error("clause set contains function terms")]
    FunctionTerms,
    #[error("query must be a ground unit clause")]
    NonGroundQuery,
}

/// Ground clause as bit masks over atom indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundClause {
    pub positive: u32,
    pub negative: u32,
}

impl GroundClause {
    fn satisfied_by(self, model: u32) -> bool {
        model & self.positive != 0 || !model & self.negative != 0
    }
}

#[derive(Debug, Clone)]
pub struct GroundProblem {
    /// Positive ground atoms, indexed by bit position.
    pub atoms: Vec<Literal>,
    pub clauses: Vec<GroundClause>,
    pub constants: Vec<String>,
    cap: usize,
    index: BTreeMap<Literal, usize>,
}

impl GroundProblem {
    fn new(constants: Vec<String>, cap: usize) -> Self {
        GroundProblem { atoms: Vec::new(), clauses: Vec::new(), constants, cap, index: BTreeMap::new() }
    }

    fn atom_bit(&mut self, lit: &Literal) -> Result<u32, OracleError> {
        let key = Literal::new(lit.predicate.clone(), lit.args.clone(), Sign::Positive);
        if let Some(&i) = self.index.get(&key) {
            return Ok(1 << i);
        }
        let i = self.atoms.len();
        if i + 1 > self.cap.min(32) {
            return Err(OracleError::AtomCapExceeded { atoms: i + 1, cap: self.cap });
        }
        self.atoms.push(key.clone());
        self.index.insert(key, i);
        Ok(1 << i)
    }

    fn add_ground(&mut self, lits: &[Literal]) -> Result<(), OracleError> {
        let mut gc = GroundClause { positive: 0, negative: 0 };
        for l in lits {
            let bit = self.atom_bit(l)?;
            match l.sign {
                Sign::Positive => gc.positive |= bit,
                Sign::Negative => gc.negative |= bit,
            }
        }
        if gc.positive & gc.negative == 0 && !self.clauses.contains(&gc) {
            self.clauses.push(gc);
        }
        Ok(())
    }

    // short clauses first: they rule out the most assignments
    fn sort_clauses(&mut self) {
        self.clauses.sort_by_key(|c| ((c.positive | c.negative).count_ones(), *c));
    }
}

/// Collects the constants of `clauses` in first-occurrence order, adding
/// [`DUMMY_CONSTANT`] when there are none.
pub fn constants_of<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for c in clauses {
        for name in c.constants() {
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    if out.is_empty() {
        out.push(DUMMY_CONSTANT.to_string());
    }
    out
}

/// Instantiates every clause over `constants`, dropping duplicate and
/// tautological ground clauses.
pub fn ground(clauses: &[Clause], constants: &[String], cap: usize) -> Result<GroundProblem, OracleError> {
    if clauses.iter().any(Clause::has_function_terms) {
        return Err(OracleError::FunctionTerms);
    }
    let constants: Vec<String> =
        if constants.is_empty() { vec![DUMMY_CONSTANT.to_string()] } else { constants.to_vec() };
    let mut gp = GroundProblem::new(constants.clone(), cap);
    for clause in clauses {
        let vars = clause.variables();
        let mut choice = vec![0usize; vars.len()];
        loop {
            let binding: BTreeMap<&str, Term> =
                vars.iter().zip(&choice).map(|(v, &i)| (v.as_str(), Term::Const(constants[i].clone()))).collect();
            let lits: Vec<Literal> = clause
                .literals()
                .iter()
                .map(|l| {
                    let args = l
                        .args
                        .iter()
                        .map(|t| match t {
                            Term::Var(v) => binding[v.as_str()].clone(),
                            other => other.clone(),
                        })
                        .collect();
                    Literal::new(l.predicate.clone(), args, l.sign)
                })
                .collect();
            gp.add_ground(&lits)?;
            // odometer over constant choices
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < constants.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    gp.sort_clauses();
    Ok(gp)
}

fn ground_unit(gp: &mut GroundProblem, unit: &Clause) -> Result<(u32, Sign), OracleError> {
    match unit.literals() {
        [lit] if lit.is_ground() && !lit.args.iter().any(Term::has_function) => Ok((gp.atom_bit(lit)?, lit.sign)),
        _ => Err(OracleError::NonGroundQuery),
    }
}

/// Whether some model of the ground clauses makes the query atom true, and
/// whether some model makes it false.
fn models(gp: &GroundProblem, bit: u32) -> (bool, bool) {
    let n = gp.atoms.len();
    let (mut with_true, mut with_false) = (false, false);
    for model in 0..(1u64 << n) {
        let model = model as u32;
        if gp.clauses.iter().all(|c| c.satisfied_by(model)) {
            if model & bit != 0 {
                with_true = true;
            } else {
                with_false = true;
            }
            if with_true && with_false {
                break;
            }
        }
    }
    (with_true, with_false)
}

/// True iff every model of `premises` satisfies the ground unit `unit`.
pub fn entails(premises: &[Clause], unit: &Clause, constants: &[String]) -> Result<bool, OracleError> {
    entails_with_cap(premises, unit, constants, DEFAULT_ATOM_CAP)
}

pub fn entails_with_cap(premises: &[Clause], unit: &Clause, constants: &[String], cap: usize) -> Result<bool, OracleError> {
    let mut gp = ground(premises, constants, cap)?;
    let (bit, sign) = ground_unit(&mut gp, unit)?;
    let (with_true, with_false) = models(&gp, bit);
    Ok(match sign {
        Sign::Positive => !with_false,
        Sign::Negative => !with_true,
    })
}

/// Four-valued answer for a ground unit query over `premises`.
pub fn oracle_answer(premises: &[Clause], query: &Clause, constants: &[String]) -> Result<Answer, OracleError> {
    oracle_answer_with_cap(premises, query, constants, DEFAULT_ATOM_CAP)
}

pub fn oracle_answer_with_cap(
    premises: &[Clause],
    query: &Clause,
    constants: &[String],
    cap: usize,
) -> Result<Answer, OracleError> {
    let mut gp = ground(premises, constants, cap)?;
    let (bit, sign) = ground_unit(&mut gp, query)?;
    let (with_true, with_false) = models(&gp, bit);
    let (entails_s, entails_not_s) = match sign {
        Sign::Positive => (!with_false, !with_true),
        Sign::Negative => (!with_true, !with_false),
    };
    Ok(match (entails_s, entails_not_s) {
        (true, false) => Answer::True,
        (false, true) => Answer::False,
        (false, false) => Answer::Unknown,
        (true, true) => Answer::SelfContradictory,
    })
}

/// Whether the ground clause set has any model.
pub fn satisfiable(clauses: &[Clause], constants: &[String]) -> Result<bool, OracleError> {
    let gp = ground(clauses, constants, DEFAULT_ATOM_CAP)?;
    let n = gp.atoms.len();
    Ok((0..(1u64 << n)).any(|m| gp.clauses.iter().all(|c| c.satisfied_by(m as u32))))
}

/// Truth value of a formula in a finite structure whose domain is `domain`
/// (each constant names itself) and whose atoms are decided by `atom`.
///
/// `atom` receives ground atoms with positive sign. Works directly on the
/// formula tree, independent of any clausal form.
pub fn eval_formula(f: &Formula, domain: &[String], atom: &mut dyn FnMut(&Literal) -> bool) -> bool {
    eval_in(f, domain, atom, &mut Vec::new())
}

fn eval_in(
    f: &Formula,
    domain: &[String],
    atom: &mut dyn FnMut(&Literal) -> bool,
    env: &mut Vec<(String, String)>,
) -> bool {
    match f {
        Formula::Atom(lit) => {
            let args = lit.args.iter().map(|t| bind_term(t, env)).collect();
            let value = atom(&Literal::new(lit.predicate.clone(), args, Sign::Positive));
            match lit.sign {
                Sign::Positive => value,
                Sign::Negative => !value,
            }
        }
        Formula::Not(a) => !eval_in(a, domain, atom, env),
        Formula::And(a, b) => eval_in(a, domain, atom, env) & eval_in(b, domain, atom, env),
        Formula::Or(a, b) => eval_in(a, domain, atom, env) | eval_in(b, domain, atom, env),
        Formula::Implies(a, b) => !eval_in(a, domain, atom, env) | eval_in(b, domain, atom, env),
        Formula::Iff(a, b) => eval_in(a, domain, atom, env) == eval_in(b, domain, atom, env),
        Formula::Xor(a, b) => eval_in(a, domain, atom, env) != eval_in(b, domain, atom, env),
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::ForAll(..));
            let mut result = universal;
            for c in domain {
                env.push((v.clone(), c.clone()));
                let value = eval_in(body, domain, atom, env);
                env.pop();
                if value != universal {
                    result = value;
                    break;
                }
            }
            result
        }
    }
}

fn bind_term(t: &Term, env: &[(String, String)]) -> Term {
    match t {
        Term::Var(v) => match env.iter().rev().find(|(n, _)| n == v) {
            Some((_, c)) => Term::Const(c.clone()),
            None => t.clone(),
        },
        Term::Const(_) => t.clone(),
        Term::Func(name, args) => Term::Func(name.clone(), args.iter().map(|a| bind_term(a, env)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Origin;

    fn lit(pred: &str, arg: &str, sign: Sign) -> Literal {
        let t = if arg.chars().next().unwrap().is_lowercase() { Term::var(arg) } else { Term::constant(arg) };
        Literal::new(pred, vec![t], sign)
    }

    fn prop(name: &str, sign: Sign) -> Literal {
        Literal::new(name, vec![], sign)
    }

    fn cl(lits: Vec<Literal>) -> Clause {
        Clause::new(lits, Origin::Premise(1))
    }

    fn dave() -> Vec<Clause> {
        use Sign::*;
        vec![
            cl(vec![lit("Green", "x", Negative), lit("Nice", "x", Positive)]),
            cl(vec![lit("Smart", "x", Negative), lit("Green", "x", Positive)]),
            cl(vec![lit("Smart", "Dave", Positive)]),
        ]
    }

    #[test]
    fn grounding_counts() {
        let rule = vec![cl(vec![lit("P", "x", Sign::Negative), lit("Q", "x", Sign::Positive)])];
        assert_eq!(ground(&rule, &["Dave".into()], 24).unwrap().clauses.len(), 1);
        assert_eq!(ground(&rule, &["A".into(), "B".into()], 24).unwrap().clauses.len(), 2);
        let facts = vec![cl(vec![lit("P", "A", Sign::Positive)]), cl(vec![lit("Q", "B", Sign::Negative)])];
        let gp = ground(&facts, &["A".into(), "B".into()], 24).unwrap();
        assert_eq!(gp.clauses.len(), 2);
        assert_eq!(gp.atoms.len(), 2);
    }

    #[test]
    fn dave_entailment() {
        let consts = constants_of(&dave());
        assert_eq!(consts, vec!["Dave".to_string()]);
        assert!(entails(&dave(), &cl(vec![lit("Nice", "Dave", Sign::Positive)]), &consts).unwrap());
        assert!(!entails(&dave(), &cl(vec![lit("Nice", "Dave", Sign::Negative)]), &consts).unwrap());
        assert_eq!(oracle_answer(&dave(), &cl(vec![lit("Nice", "Dave", Sign::Negative)]), &consts), Ok(Answer::False));
    }

    #[test]
    fn empty_premises_entail_nothing() {
        let q = cl(vec![prop("A", Sign::Positive)]);
        assert!(!entails(&[], &q, &[]).unwrap());
        assert!(!entails(&[], &cl(vec![prop("A", Sign::Negative)]), &[]).unwrap());
        assert_eq!(oracle_answer(&[], &q, &[]), Ok(Answer::Unknown));
    }

    /// Hand-checked propositional cases.
    #[test]
    fn propositional_micro_suite() {
        use Sign::*;
        let a = || prop("A", Positive);
        let na = || prop("A", Negative);
        let b = || prop("B", Positive);
        let nb = || prop("B", Negative);
        let cases: Vec<(Vec<Clause>, Clause, Answer)> = vec![
            (vec![cl(vec![a()])], cl(vec![a()]), Answer::True),
            (vec![cl(vec![a()])], cl(vec![na()]), Answer::False),
            (vec![cl(vec![a()]), cl(vec![na()])], cl(vec![b()]), Answer::SelfContradictory),
            (vec![cl(vec![a(), b()])], cl(vec![a()]), Answer::Unknown),
            (vec![cl(vec![a(), b()]), cl(vec![nb()])], cl(vec![a()]), Answer::True),
            (vec![cl(vec![na(), b()]), cl(vec![a()])], cl(vec![nb()]), Answer::False),
            (vec![cl(vec![a(), b()]), cl(vec![na(), b()])], cl(vec![b()]), Answer::True),
            (vec![cl(vec![a(), b()]), cl(vec![na(), nb()])], cl(vec![a()]), Answer::Unknown),
        ];
        for (i, (p, q, expected)) in cases.iter().enumerate() {
            assert_eq!(oracle_answer(p, q, &[]).unwrap(), *expected, "case {i}");
        }
    }

    #[test]
    fn atom_cap_is_enforced() {
        let rule = vec![cl(vec![Literal::new("R", vec![Term::var("x"), Term::var("y")], Sign::Positive)])];
        let consts: Vec<String> = (0..5).map(|i| format!("K{i}")).collect();
        assert_eq!(
            ground(&rule, &consts, 24).unwrap_err(),
            OracleError::AtomCapExceeded { atoms: 25, cap: 24 }
        );
    }

    #[test]
    fn function_terms_are_exempt() {
        let f = vec![cl(vec![Literal::new("P", vec![Term::Func("sk1".into(), vec![Term::var("x")])], Sign::Positive)])];
        assert_eq!(ground(&f, &["A".into()], 24).unwrap_err(), OracleError::FunctionTerms);
    }

    #[test]
    fn formula_evaluation() {
        let f = crate::parser::parse_formula("∀x (P(x) → Q(x))").unwrap();
        let domain = vec!["A".to_string(), "B".to_string()];
        assert!(eval_formula(&f, &domain, &mut |l| l.predicate == "Q"));
        assert!(!eval_formula(&f, &domain, &mut |l| l.predicate == "P"));
        let g = crate::parser::parse_formula("∃x P(x, False)").unwrap();
        assert!(eval_formula(&g, &domain, &mut |l| l.args[0] == Term::constant("A")));
    }
}
