//! Benchmark scaffolding: problem files, batch runs, reports and audits.

mod generate;
mod report;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{Answer, Clause, Formula};
use crate::decompose::{decompose, DecomposeConfig, DecomposeError};
use crate::engine::{solve, EngineConfig, Termination, Verdict};
use crate::oracle::{self, OracleError};
use crate::parser::{parse_problem, ProblemError, ProblemSource};
use crate::translator::{translate_remote, translate_templated, Dialect, RemoteTranslatorEndpoint};

pub use generate::{generate_suite, GenParams};
pub use report::{Aggregates, ConfigSnapshot, DepthStats, Failure, FailureKind, LabelStats, Record, Report, UnknownCause};

pub const REPORT_SCHEMA: &str = "dualproof.report/1";

/// One benchmark item as stored in a JSONL file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub id: String,
    /// Formula lines, or natural-language sentences when `dialect` or `nl` is set.
    pub premises: Vec<String>,
    pub query: String,
    pub label: Answer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dialect: Option<Dialect>,
    /// Natural language without a template dialect; needs a remote translator.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub nl: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
}

impl Problem {
    pub fn is_natural_language(&self) -> bool {
        self.nl || self.dialect.is_some()
    }

    pub fn to_source(&self) -> ProblemSource {
        ProblemSource::new(self.id.clone(), self.premises.clone(), self.query.clone())
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

/// Parses JSONL problem text; blank lines are skipped, line numbers are 1-based.
pub fn parse_problems(text: &str) -> Result<Vec<Problem>, LoadError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p: Problem =
            serde_json::from_str(line).map_err(|e| LoadError::Line { line: i + 1, message: e.to_string() })?;
        out.push(p);
    }
    Ok(out)
}

pub fn load_problems(path: &Path) -> Result<Vec<Problem>, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    parse_problems(&text)
}

/// Writes problems as JSONL.
pub fn problems_to_jsonl(problems: &[Problem]) -> String {
    problems.iter().map(|p| serde_json::to_string(p).expect("problem serializes") + "\n").collect()
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub engine: EngineConfig,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
    /// Used for natural-language problems instead of the templates when set.
    pub translator: Option<RemoteTranslatorEndpoint>,
    /// Remote translation calls allowed in flight at once.
    pub remote_concurrency: usize,
    /// One trace file per problem is written here when set.
    pub trace_dir: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { engine: EngineConfig::default(), jobs: 0, translator: None, remote_concurrency: 4, trace_dir: None }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot build worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("cannot write trace {path}: {source}")]
    Trace { path: PathBuf, source: io::Error },
}

/// Symbolic form of a problem, translating natural language when needed.
pub fn symbolic(problem: &Problem, translator: Option<&RemoteTranslatorEndpoint>) -> Result<(Vec<Formula>, Formula), Failure> {
    if !problem.is_natural_language() {
        let parsed = parse_problem(&problem.to_source()).map_err(|e| Failure::new(FailureKind::Parse, e))?;
        return Ok((parsed.premises, parsed.query));
    }
    let translation = match (translator, problem.dialect) {
        (Some(ep), _) => translate_remote(&problem.premises, &problem.query, ep)
            .map(|r| r.translation)
            .map_err(|e| Failure::new(FailureKind::Translation, e))?,
        (None, Some(dialect)) => translate_templated(&problem.premises, &problem.query, dialect)
            .map_err(|e| Failure::new(FailureKind::Translation, e))?,
        (None, None) => {
            return Err(Failure::new(FailureKind::Translation, "natural-language problem without dialect or translator"))
        }
    };
    Ok((translation.premises, translation.query))
}

/// Cause recorded for an Unknown answer: the first path whose refutation
/// the gold label says should exist, otherwise the first path.
fn unknown_cause(v: &Verdict, gold: Answer) -> UnknownCause {
    let path = match gold {
        Answer::False => &v.from_s,
        Answer::True => &v.from_neg_s,
        _ if v.from_s.termination != Termination::Exhausted => &v.from_s,
        _ => &v.from_neg_s,
    };
    match path.termination {
        Termination::IterationLimit => UnknownCause::IterationLimit,
        Termination::BacktrackLimit => UnknownCause::BacktrackLimit,
        Termination::ClauseBlowup => UnknownCause::ClauseBlowup,
        Termination::Exhausted | Termination::Contradiction => UnknownCause::Exhausted,
    }
}

pub fn trace_file_name(id: &str) -> String {
    let safe: String = id.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' }).collect();
    format!("{safe}.json")
}

fn run_one(
    problem: &Problem,
    symbolic_form: Result<(Vec<Formula>, Formula), Failure>,
    cfg: &BenchConfig,
) -> Result<Record, HarnessError> {
    let started = Instant::now();
    let mut record = Record::new(problem);
    let (premises, query) = match symbolic_form {
        Ok(s) => s,
        Err(f) => {
            record.failure = Some(f);
            return Ok(record);
        }
    };
    match solve(&premises, &query, &cfg.engine) {
        Ok(v) => {
            record.answer = Some(v.answer);
            record.matched = v.answer == problem.label;
            record.steps = v.stats.iterations;
            record.backtracks = v.stats.backtracks;
            record.i_max_hit = v.hit_iteration_limit();
            record.blowup = v.blowup();
            if v.answer == Answer::Unknown && problem.label != Answer::Unknown {
                record.unknown_cause = Some(unknown_cause(&v, problem.label));
            }
            if let Some(dir) = &cfg.trace_dir {
                let path = dir.join(trace_file_name(&problem.id));
                let doc = serde_json::to_string_pretty(&v.trace(&problem.id, false)).expect("trace serializes");
                fs::write(&path, doc + "\n").map_err(|source| HarnessError::Trace { path, source })?;
            }
        }
        Err(e) => {
            let kind = match e {
                crate::engine::EngineError::Decompose(_) => FailureKind::Decompose,
                _ => FailureKind::Parse,
            };
            record.failure = Some(Failure::new(kind, e));
        }
    }
    record.wall_time_us = started.elapsed().as_micros() as u64;
    Ok(record)
}

/// Solves every problem independently and aggregates the results.
pub fn run_benchmark(problems: &[Problem], cfg: &BenchConfig) -> Result<Report, HarnessError> {
    if let Some(dir) = &cfg.trace_dir {
        fs::create_dir_all(dir).map_err(|source| HarnessError::Trace { path: dir.clone(), source })?;
    }
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;

    let forms: Vec<Result<(Vec<Formula>, Formula), Failure>> = match &cfg.translator {
        Some(ep) if problems.iter().any(Problem::is_natural_language) => {
            let remote = rayon::ThreadPoolBuilder::new().num_threads(cfg.remote_concurrency.max(1)).build()?;
            remote.install(|| problems.par_iter().map(|p| symbolic(p, Some(ep))).collect())
        }
        _ => pool.install(|| problems.par_iter().map(|p| symbolic(p, None)).collect()),
    };
    let records = pool.install(|| {
        problems.par_iter().zip(forms).map(|(p, form)| run_one(p, form, cfg)).collect::<Result<Vec<_>, _>>()
    })?;

    let config = ConfigSnapshot::new(&cfg.engine, cfg.translator.is_some());
    let mut report = Report::new(config, records);
    report.wall_time_us = started.elapsed().as_micros() as u64;
    Ok(report)
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Parse(#[from] ProblemError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("oracle-exempt: {0}")]
    OracleExempt(OracleError),
    #[error(transparent)]
    Engine(#[from] crate::engine::EngineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agree,
    /// Engine said Unknown where the oracle has a definite answer.
    Incomplete,
    /// Engine gave a definite answer the oracle contradicts.
    Violation,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub engine: Answer,
    pub oracle: Answer,
    pub agreement: Agreement,
}

pub fn agreement(engine: Answer, oracle: Answer) -> Agreement {
    if engine == oracle {
        Agreement::Agree
    } else if engine == Answer::Unknown {
        Agreement::Incomplete
    } else {
        Agreement::Violation
    }
}

/// Oracle answer for a parsed problem; function terms or too many atoms make it exempt.
pub fn oracle_for(premises: &[Formula], query: &Formula, cfg: &EngineConfig) -> Result<Answer, CheckError> {
    let d = decompose(premises, query, DecomposeConfig { clause_cap: cfg.clause_cap })?;
    let all: Vec<&Clause> = d.premises.iter().chain(std::iter::once(&d.query)).collect();
    let constants = oracle::constants_of(all);
    oracle::oracle_answer(&d.premises, &d.query, &constants).map_err(CheckError::OracleExempt)
}

/// Compares the engine with the oracle on one problem.
pub fn check_problem(src: &ProblemSource, cfg: &EngineConfig) -> Result<CheckOutcome, CheckError> {
    let parsed = parse_problem(src)?;
    let oracle = oracle_for(&parsed.premises, &parsed.query, cfg)?;
    let engine = solve(&parsed.premises, &parsed.query, cfg)?.answer;
    Ok(CheckOutcome { engine, oracle, agreement: agreement(engine, oracle) })
}
