//! Dual-path proof by contradiction.
//!
//! One path starts from the query `S`, the other from its negation `¬S`.
//! Each path repeatedly resolves its current clause against a complementary
//! clause, appending every resolvent to a path-private clause index, until it
//! derives the empty clause, runs out of partners, or hits a limit. The two
//! outcomes are combined into a four-valued [`Answer`].

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::ast::{clause_equal_mod_renaming, Answer, Clause, Determination, Entailment, Formula, Origin, PathKind};
use crate::decompose::{decompose, DecomposeConfig, DecomposeError, Decomposition, FormulaStages, DEFAULT_CLAUSE_CAP};
use crate::parser::{parse_problem, ProblemError, ProblemSource};
use crate::resolver::{resolve_on, Resolution};
use crate::search::{next_candidate, BackupStack, ClauseIndex, Next, SearchHead, Situation};

pub const DEFAULT_I_MAX: usize = 20;
pub const DEFAULT_BACKTRACK_LIMIT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceVerbosity {
    /// Outcome and statistics only.
    Summary,
    /// Every resolution step.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    /// Resolution steps allowed per path, backtracked steps included.
    pub i_max: usize,
    /// Cap on CNF clauses per problem and on derived clauses per path.
    pub clause_cap: usize,
    pub backtrack_limit: usize,
    pub verbosity: TraceVerbosity,
    /// Run the two paths on separate threads.
    pub parallel_paths: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            i_max: DEFAULT_I_MAX,
            clause_cap: DEFAULT_CLAUSE_CAP,
            backtrack_limit: DEFAULT_BACKTRACK_LIMIT,
            verbosity: TraceVerbosity::Full,
            parallel_paths: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("i_max must be at least 1")]
    ZeroIterations,
    #[error("clause cap must be at least 1")]
    ZeroClauseCap,
}

impl EngineConfig {
    pub fn with_i_max(mut self, i_max: usize) -> Self {
        self.i_max = i_max;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.i_max == 0 {
            return Err(ConfigError::ZeroIterations);
        }
        if self.clause_cap == 0 {
            return Err(ConfigError::ZeroClauseCap);
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Parse(#[from] ProblemError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Why a path stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Derived the empty clause.
    Contradiction,
    /// No complementary clause and no backups left.
    Exhausted,
    /// Reached `i_max` resolution steps.
    IterationLimit,
    BacktrackLimit,
    /// Derived-clause count exceeded the clause cap.
    ClauseBlowup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOutcome {
    Resolved,
    Contradiction,
    /// Resolvent held a complementary pair; treated as a dead end.
    Tautology,
    /// Resolvent already derived on this path; treated as a dead end.
    Revisited,
}

/// One resolution step of a path.
#[derive(Debug, Clone, Serialize)]
pub struct Step {
    /// 1-based position in the path's trace.
    pub step: usize,
    /// Step that produced `current`; `None` when `current` is the start clause.
    pub parent: Option<usize>,
    pub situation: &'static str,
    pub current: String,
    pub pivot: String,
    pub complement: String,
    pub complement_origin: Origin,
    pub complement_pivot: String,
    pub mgu: BTreeMap<String, String>,
    pub resolvent: String,
    pub outcome: StepOutcome,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PathStats {
    pub iterations: usize,
    pub candidates_examined: usize,
    pub backtracks: usize,
    pub derived: usize,
    /// Length of the branch that reached the empty clause, if any.
    pub proof_length: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct PathResult {
    pub start: Clause,
    pub determination: Determination,
    pub termination: Termination,
    pub steps: Vec<Step>,
    pub stats: PathStats,
}

impl PathResult {
    /// Step numbers on the branch ending in the empty clause, root first.
    pub fn refutation(&self) -> Vec<usize> {
        let Some(last) = self.steps.iter().rev().find(|s| s.outcome == StepOutcome::Contradiction) else {
            return Vec::new();
        };
        let mut chain = vec![last.step];
        let mut parent = last.parent;
        while let Some(p) = parent {
            chain.push(p);
            parent = self.steps[p - 1].parent;
        }
        chain.reverse();
        chain
    }
}

struct Visited {
    by_shape: BTreeMap<(usize, String), Vec<Clause>>,
}

impl Visited {
    fn new() -> Self {
        Visited { by_shape: BTreeMap::new() }
    }

    fn shape(c: &Clause) -> (usize, String) {
        let mut preds: Vec<String> =
            c.literals().iter().map(|l| format!("{}/{}/{:?}", l.predicate, l.arity(), l.sign)).collect();
        preds.sort();
        (c.len(), preds.join(","))
    }

    /// Inserts `c` unless an equal clause up to renaming is present.
    fn insert(&mut self, c: &Clause) -> bool {
        let bucket = self.by_shape.entry(Self::shape(c)).or_default();
        if bucket.iter().any(|seen| clause_equal_mod_renaming(seen, c)) {
            return false;
        }
        bucket.push(c.clone());
        true
    }
}

/// Runs one reasoning path from `start` over a private copy of `premises`.
pub fn prove_path(premises: &[Clause], start: &Clause, path: PathKind, cfg: &EngineConfig) -> PathResult {
    let mut idx = ClauseIndex::build(premises);
    let start = start.clone().with_origin(match path {
        PathKind::FromS => Origin::Query,
        PathKind::FromNegS => Origin::NegatedQuery,
    });
    // the start clause is a member of the refutation set, usable again further down the branch
    idx.append(start.clone());
    let mut visited = Visited::new();
    visited.insert(&start);

    let mut head = SearchHead { current: start.clone(), depth: 0, parent_step: None };
    let mut backups = BackupStack::new();
    let mut steps: Vec<Step> = Vec::new();
    let mut stats = PathStats::default();
    let mut dead_end = false;

    let termination = loop {
        if stats.iterations >= cfg.i_max {
            break Termination::IterationLimit;
        }
        let (cand, situation) = match next_candidate(&mut head, &mut backups, &idx, dead_end) {
            Next::Exhausted => break Termination::Exhausted,
            Next::Candidate { candidate, situation, found } => {
                stats.candidates_examined += found;
                (candidate, situation)
            }
        };
        if situation == Situation::Backtracked {
            stats.backtracks += 1;
            if stats.backtracks > cfg.backtrack_limit {
                break Termination::BacktrackLimit;
            }
        }
        stats.iterations += 1;
        let step_no = steps.len() + 1;
        let (resolution, mgu) =
            resolve_on(&head.current, cand.current_pos, &cand.clause, cand.complement_pos, Origin::Derived(step_no))
                .expect("search router only yields unifiable complementary pairs");

        let (outcome, resolvent_text) = match &resolution {
            Resolution::Contradiction => (StepOutcome::Contradiction, "⊥".to_string()),
            Resolution::Tautology(c) => (StepOutcome::Tautology, c.to_string()),
            Resolution::Resolvent(c) if !visited.insert(c) => (StepOutcome::Revisited, c.to_string()),
            Resolution::Resolvent(c) => (StepOutcome::Resolved, c.to_string()),
        };
        steps.push(Step {
            step: step_no,
            parent: head.parent_step,
            situation: match situation {
                Situation::Single => "single",
                Situation::Multiple { .. } => "multiple",
                Situation::Backtracked => "backtrack",
            },
            current: head.current.to_string(),
            pivot: head.current.literals()[cand.current_pos].to_string(),
            complement: cand.clause.to_string(),
            complement_origin: cand.origin,
            complement_pivot: cand.clause.literals()[cand.complement_pos].to_string(),
            mgu: mgu.to_string_map(),
            resolvent: resolvent_text,
            outcome,
        });

        match (resolution, outcome) {
            (Resolution::Contradiction, _) => {
                stats.proof_length = Some(head.depth + 1);
                break Termination::Contradiction;
            }
            (Resolution::Resolvent(c), StepOutcome::Resolved) => {
                idx.append(c.clone());
                stats.derived += 1;
                if stats.derived > cfg.clause_cap {
                    break Termination::ClauseBlowup;
                }
                head = SearchHead { current: c, depth: head.depth + 1, parent_step: Some(step_no) };
                dead_end = false;
            }
            _ => dead_end = true,
        }
    };

    let outcome = if termination == Termination::Contradiction { Entailment::Entails } else { Entailment::NotEntails };
    PathResult { start, determination: Determination::new(path, outcome), termination, steps, stats }
}

/// Combines the two path determinations into an answer.
///
/// | from S (P ⊢ ¬S?) | from ¬S (P ⊢ S?) | answer             |
/// |------------------|------------------|--------------------|
/// | no               | yes              | True               |
/// | yes              | no               | False              |
/// | no               | no               | Unknown            |
/// | yes              | yes              | Self-contradictory |
pub fn classify(d_s: Determination, d_neg_s: Determination) -> Answer {
    debug_assert_eq!(d_s.path, PathKind::FromS);
    debug_assert_eq!(d_neg_s.path, PathKind::FromNegS);
    match (d_neg_s.entails(), d_s.entails()) {
        (true, false) => Answer::True,
        (false, true) => Answer::False,
        (false, false) => Answer::Unknown,
        (true, true) => Answer::SelfContradictory,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VerdictStats {
    /// Resolution steps over both paths.
    pub iterations: usize,
    pub candidates_examined: usize,
    pub backtracks: usize,
    pub wall_time_us: u64,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub answer: Answer,
    pub d_s: Determination,
    pub d_neg_s: Determination,
    pub from_s: PathResult,
    pub from_neg_s: PathResult,
    pub stats: VerdictStats,
    pub decomposition: Decomposition,
    pub verbosity: TraceVerbosity,
}

impl Verdict {
    pub fn paths(&self) -> [&PathResult; 2] {
        [&self.from_s, &self.from_neg_s]
    }

    pub fn hit_iteration_limit(&self) -> bool {
        self.paths().iter().any(|p| p.termination == Termination::IterationLimit)
    }

    pub fn blowup(&self) -> bool {
        self.paths().iter().any(|p| p.termination == Termination::ClauseBlowup)
    }

    /// Serializable trace document.
    pub fn trace(&self, problem_id: &str, explain: bool) -> TraceDocument {
        let full = |p: &PathResult| PathTrace {
            path: p.determination.path,
            start: p.start.to_string(),
            determination: p.determination.outcome,
            claim: p.determination.claim(),
            termination: p.termination,
            refutation: p.refutation(),
            stats: p.stats,
            steps: p.steps.clone(),
        };
        let mut paths = vec![full(&self.from_s), full(&self.from_neg_s)];
        if self.verbosity == TraceVerbosity::Summary {
            paths.iter_mut().for_each(|p| p.steps.clear());
        }
        TraceDocument {
            schema: TRACE_SCHEMA,
            problem_id: problem_id.to_string(),
            answer: self.answer,
            premises: self.decomposition.premises.iter().map(|c| format!("{} ::: {}", c, c.origin)).collect(),
            query: self.decomposition.query.to_string(),
            paths,
            stats: self.stats,
            explain: explain.then(|| self.decomposition.stages.clone()),
        }
    }
}

pub const TRACE_SCHEMA: &str = "dualproof.trace/1";

#[derive(Debug, Clone, Serialize)]
pub struct PathTrace {
    pub path: PathKind,
    pub start: String,
    pub determination: Entailment,
    pub claim: &'static str,
    pub termination: Termination,
    pub refutation: Vec<usize>,
    pub stats: PathStats,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceDocument {
    pub schema: &'static str,
    pub problem_id: String,
    pub answer: Answer,
    pub premises: Vec<String>,
    pub query: String,
    pub paths: Vec<PathTrace>,
    pub stats: VerdictStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explain: Option<Vec<FormulaStages>>,
}

/// Decomposes the problem and runs both paths.
pub fn solve(premises: &[Formula], query: &Formula, cfg: &EngineConfig) -> Result<Verdict, EngineError> {
    cfg.validate()?;
    let started = Instant::now();
    let decomposition = decompose(premises, query, DecomposeConfig { clause_cap: cfg.clause_cap })?;
    let run = |start: &Clause, path| prove_path(&decomposition.premises, start, path, cfg);
    let (from_s, from_neg_s) = if cfg.parallel_paths {
        rayon::join(|| run(&decomposition.query, PathKind::FromS), || run(&decomposition.negated_query, PathKind::FromNegS))
    } else {
        (run(&decomposition.query, PathKind::FromS), run(&decomposition.negated_query, PathKind::FromNegS))
    };
    let d_s = from_s.determination;
    let d_neg_s = from_neg_s.determination;
    let stats = VerdictStats {
        iterations: from_s.stats.iterations + from_neg_s.stats.iterations,
        candidates_examined: from_s.stats.candidates_examined + from_neg_s.stats.candidates_examined,
        backtracks: from_s.stats.backtracks + from_neg_s.stats.backtracks,
        wall_time_us: started.elapsed().as_micros() as u64,
    };
    Ok(Verdict {
        answer: classify(d_s, d_neg_s),
        d_s,
        d_neg_s,
        from_s,
        from_neg_s,
        stats,
        decomposition,
        verbosity: cfg.verbosity,
    })
}

/// Parses and solves a textual problem.
pub fn solve_source(src: &ProblemSource, cfg: &EngineConfig) -> Result<Verdict, EngineError> {
    let parsed = parse_problem(src)?;
    solve(&parsed.premises, &parsed.query, cfg)
}
