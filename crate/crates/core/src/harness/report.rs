use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::{Problem, REPORT_SCHEMA};
use crate::ast::Answer;
use crate::engine::EngineConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Translation,
    Parse,
    Decompose,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl Failure {
    pub fn new(kind: FailureKind, message: impl fmt::Display) -> Self {
        Failure { kind, message: message.to_string() }
    }
}

/// Why the engine answered Unknown against a definite gold label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownCause {
    IterationLimit,
    Exhausted,
    BacktrackLimit,
    ClauseBlowup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub gold: Answer,
    pub answer: Option<Answer>,
    pub matched: bool,
    /// Resolution steps over both paths.
    pub steps: usize,
    pub backtracks: usize,
    pub i_max_hit: bool,
    pub blowup: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unknown_cause: Option<UnknownCause>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    pub wall_time_us: u64,
}

impl Record {
    pub(super) fn new(p: &Problem) -> Self {
        Record {
            id: p.id.clone(),
            gold: p.label,
            answer: None,
            matched: false,
            steps: 0,
            backtracks: 0,
            i_max_hit: false,
            blowup: false,
            unknown_cause: None,
            failure: None,
            depth: p.depth,
            wall_time_us: 0,
        }
    }

    pub fn is_scored(&self) -> bool {
        self.failure.is_none()
    }

    /// Definite engine answer that differs from the gold label.
    pub fn is_definite_mismatch(&self) -> bool {
        matches!(self.answer, Some(a) if a != Answer::Unknown && a != self.gold)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LabelStats {
    pub count: usize,
    pub matches: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DepthStats {
    pub count: usize,
    pub matches: usize,
    pub accuracy: f64,
    pub mean_steps: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub problems: usize,
    /// Problems that reached the engine.
    pub scored: usize,
    pub matches: usize,
    pub accuracy: f64,
    pub per_label: BTreeMap<Answer, LabelStats>,
    pub per_depth: BTreeMap<usize, DepthStats>,
    pub mean_steps: f64,
    /// Scored problems where some path stopped at `i_max`.
    pub insufficient_iteration_rate: f64,
    pub translation_failures: usize,
    pub parse_failures: usize,
    pub decompose_failures: usize,
    /// Definite engine answers contradicting the gold label.
    pub definite_mismatches: usize,
    pub unknown_mismatches: usize,
    pub unknown_causes: BTreeMap<UnknownCause, usize>,
    pub blowups: usize,
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

impl Aggregates {
    pub fn from_records(records: &[Record]) -> Self {
        let mut a = Aggregates { problems: records.len(), ..Default::default() };
        let mut total_steps = 0usize;
        let mut i_max_hits = 0usize;
        let mut depth_steps: BTreeMap<usize, usize> = BTreeMap::new();
        for r in records {
            if let Some(f) = &r.failure {
                match f.kind {
                    FailureKind::Translation => a.translation_failures += 1,
                    FailureKind::Parse => a.parse_failures += 1,
                    FailureKind::Decompose => a.decompose_failures += 1,
                }
                continue;
            }
            a.scored += 1;
            a.matches += r.matched as usize;
            total_steps += r.steps;
            i_max_hits += r.i_max_hit as usize;
            a.blowups += r.blowup as usize;
            a.definite_mismatches += r.is_definite_mismatch() as usize;
            if !r.matched && r.answer == Some(Answer::Unknown) {
                a.unknown_mismatches += 1;
            }
            if let Some(c) = r.unknown_cause {
                *a.unknown_causes.entry(c).or_default() += 1;
            }
            let label = a.per_label.entry(r.gold).or_default();
            label.count += 1;
            label.matches += r.matched as usize;
            if let Some(d) = r.depth {
                let ds = a.per_depth.entry(d).or_default();
                ds.count += 1;
                ds.matches += r.matched as usize;
                *depth_steps.entry(d).or_default() += r.steps;
            }
        }
        a.accuracy = ratio(a.matches, a.scored);
        a.mean_steps = ratio(total_steps, a.scored);
        a.insufficient_iteration_rate = ratio(i_max_hits, a.scored);
        for l in a.per_label.values_mut() {
            l.accuracy = ratio(l.matches, l.count);
        }
        for (d, ds) in a.per_depth.iter_mut() {
            ds.accuracy = ratio(ds.matches, ds.count);
            ds.mean_steps = ratio(depth_steps[d], ds.count);
        }
        a
    }
}

/// Settings that influence answers, recorded alongside the results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub i_max: usize,
    pub clause_cap: usize,
    pub backtrack_limit: usize,
    pub translator: String,
}

impl ConfigSnapshot {
    pub fn new(cfg: &EngineConfig, remote: bool) -> Self {
        ConfigSnapshot {
            i_max: cfg.i_max,
            clause_cap: cfg.clause_cap,
            backtrack_limit: cfg.backtrack_limit,
            translator: if remote { "remote" } else { "templated" }.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub config: ConfigSnapshot,
    pub aggregates: Aggregates,
    /// Sorted by problem id.
    pub records: Vec<Record>,
    pub wall_time_us: u64,
}

impl Report {
    pub fn new(config: ConfigSnapshot, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let aggregates = Aggregates::from_records(&records);
        Report { schema: REPORT_SCHEMA.to_string(), config, aggregates, records, wall_time_us: 0 }
    }

    /// Zeroes every wall-clock field.
    pub fn strip_timing(&mut self) {
        self.wall_time_us = 0;
        self.records.iter_mut().for_each(|r| r.wall_time_us = 0);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Human-readable summary.
    pub fn table(&self) -> String {
        let a = &self.aggregates;
        let mut s = String::new();
        let _ = writeln!(s, "problems               {}", a.problems);
        let _ = writeln!(s, "scored                 {}", a.scored);
        let _ = writeln!(s, "accuracy               {:.2}% ({}/{})", a.accuracy * 100.0, a.matches, a.scored);
        for (label, l) in &a.per_label {
            let _ = writeln!(s, "  gold {:<17} {:.2}% ({}/{})", label.to_string(), l.accuracy * 100.0, l.matches, l.count);
        }
        for (depth, d) in &a.per_depth {
            let _ = writeln!(
                s,
                "  depth {:<16} {:.2}% ({}/{}), mean steps {:.2}",
                depth,
                d.accuracy * 100.0,
                d.matches,
                d.count,
                d.mean_steps
            );
        }
        let _ = writeln!(s, "mean steps             {:.2}", a.mean_steps);
        let _ = writeln!(s, "insufficient iterations {:.2}%", a.insufficient_iteration_rate * 100.0);
        let _ = writeln!(s, "definite mismatches    {}", a.definite_mismatches);
        let _ = writeln!(s, "unknown mismatches     {}", a.unknown_mismatches);
        for (cause, n) in &a.unknown_causes {
            let _ = writeln!(s, "  {:<21} {}", format!("{cause:?}"), n);
        }
        let _ = writeln!(s, "translation failures   {}", a.translation_failures);
        let _ = writeln!(s, "parse failures         {}", a.parse_failures);
        let _ = writeln!(s, "decompose failures     {}", a.decompose_failures);
        s
    }
}
