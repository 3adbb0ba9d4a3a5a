//! Complementary-clause lookup and the backtracking choice of the next
//! resolution partner.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use crate::ast::{Clause, Origin, Sign};
use crate::resolver::{standardize_apart, unify, Substitution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Entry {
    clause: usize,
    literal: usize,
}

#[derive(Debug, Clone)]
struct Stored {
    clause: Arc<Clause>,
}

/// Clause store plus a `(predicate, sign)` → literal-occurrence index.
///
/// Store position doubles as the origin rank: premises come first in source
/// order, appended clauses after them. Every bucket is kept sorted by
/// (clause length, rank).
#[derive(Debug, Clone, Default)]
pub struct ClauseIndex {
    store: Vec<Stored>,
    buckets: BTreeMap<(String, Sign), Vec<Entry>>,
    premise_count: usize,
}

impl ClauseIndex {
    pub fn build(premises: &[Clause]) -> Self {
        let mut idx = ClauseIndex::default();
        for c in premises {
            idx.push(c.clone());
        }
        idx.premise_count = premises.len();
        idx
    }

    /// Adds a clause ranked after everything already stored.
    pub fn append(&mut self, clause: Clause) -> usize {
        self.push(clause)
    }

    fn push(&mut self, clause: Clause) -> usize {
        let id = self.store.len();
        let len = clause.len();
        let clause = Arc::new(clause);
        self.store.push(Stored { clause: Arc::clone(&clause) });
        for (pos, lit) in clause.literals().iter().enumerate() {
            let bucket = self.buckets.entry((lit.predicate.clone(), lit.sign)).or_default();
            let store = &self.store;
            // new clause has the highest rank, so it goes after every entry of equal or shorter length
            let at = bucket.partition_point(|e| store[e.clause].clause.len() <= len);
            bucket.insert(at, Entry { clause: id, literal: pos });
        }
        id
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    pub fn premise_count(&self) -> usize {
        self.premise_count
    }

    pub fn derived_count(&self) -> usize {
        self.store.len() - self.premise_count
    }

    pub fn clause(&self, rank: usize) -> &Clause {
        &self.store[rank].clause
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.store.iter().map(|s| s.clause.as_ref())
    }

    /// `(rank, literal position)` pairs of one bucket in iteration order.
    pub fn bucket(&self, predicate: &str, sign: Sign) -> Vec<(usize, usize)> {
        self.buckets
            .get(&(predicate.to_string(), sign))
            .map(|b| b.iter().map(|e| (e.clause, e.literal)).collect())
            .unwrap_or_default()
    }

    /// Every bucket key with its entries, for audits.
    pub fn buckets(&self) -> impl Iterator<Item = (&(String, Sign), Vec<(usize, usize)>)> {
        self.buckets.iter().map(|(k, b)| (k, b.iter().map(|e| (e.clause, e.literal)).collect()))
    }
}

pub fn build_index(premises: &[Clause]) -> ClauseIndex {
    ClauseIndex::build(premises)
}

/// A clause that can be resolved against the current clause.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// The stored clause, standardized apart from the current clause.
    pub clause: Clause,
    pub current_pos: usize,
    pub complement_pos: usize,
    pub mgu: Substitution,
    pub clause_len: usize,
    pub origin_rank: usize,
    pub origin: Origin,
}

impl Candidate {
    fn sort_key(&self) -> (usize, usize, usize, usize) {
        (self.clause_len, self.origin_rank, self.current_pos, self.complement_pos)
    }
}

/// Every stored clause holding a literal complementary (after unification) to
/// some literal of `current`, shortest clauses first, then by rank, then by
/// pivot position in `current`.
pub fn find_complements(current: &Clause, idx: &ClauseIndex) -> Vec<Candidate> {
    let mut out = Vec::new();
    let mut renamed: BTreeMap<usize, Clause> = BTreeMap::new();
    for (cur_pos, lit) in current.literals().iter().enumerate() {
        let Some(bucket) = idx.buckets.get(&(lit.predicate.clone(), lit.sign.flip())) else { continue };
        for e in bucket {
            let stored = &idx.store[e.clause].clause;
            if stored.literals()[e.literal].arity() != lit.arity() {
                continue;
            }
            let other = renamed.entry(e.clause).or_insert_with(|| standardize_apart(current, stored).1);
            if let Some(mgu) = unify(&lit.args, &other.literals()[e.literal].args) {
                out.push(Candidate {
                    clause: other.clone(),
                    current_pos: cur_pos,
                    complement_pos: e.literal,
                    mgu,
                    clause_len: other.len(),
                    origin_rank: e.clause,
                    origin: other.origin,
                });
            }
        }
    }
    out.sort_by_key(Candidate::sort_key);
    out
}

/// The part of a reasoning path that backtracking restores.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchHead {
    pub current: Clause,
    /// Resolutions on the branch leading to `current`.
    pub depth: usize,
    /// Trace step that produced `current`, if any.
    pub parent_step: Option<usize>,
}

#[derive(Debug, Clone)]
struct Frame {
    head: SearchHead,
    remaining: VecDeque<Candidate>,
}

/// Alternatives set aside when a clause had more than one partner. LIFO.
#[derive(Debug, Clone, Default)]
pub struct BackupStack {
    frames: Vec<Frame>,
}

impl BackupStack {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    /// Total number of stashed candidates across frames.
    pub fn stashed(&self) -> usize {
        self.frames.iter().map(|f| f.remaining.len()).sum()
    }

    fn push(&mut self, head: SearchHead, remaining: VecDeque<Candidate>) {
        if !remaining.is_empty() {
            self.frames.push(Frame { head, remaining });
        }
    }

    /// Restores the most recent snapshot into `head` and takes its next candidate.
    fn pop_into(&mut self, head: &mut SearchHead) -> Option<Candidate> {
        let mut frame = self.frames.pop()?;
        let cand = frame.remaining.pop_front().expect("frames are never empty");
        *head = frame.head.clone();
        if !frame.remaining.is_empty() {
            self.frames.push(frame);
        }
        Some(cand)
    }
}

/// How a candidate was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Situation {
    /// Exactly one partner found.
    Single,
    /// Several found: the first is used, `stashed` are kept as backups.
    Multiple { stashed: usize },
    /// None usable from the current clause; resumed from a backup.
    Backtracked,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Next {
    Candidate { candidate: Candidate, situation: Situation, found: usize },
    Exhausted,
}

/// Chooses the next resolution partner for `head.current`.
///
/// With `dead_end` set (the previous resolvent was discarded) the search from
/// `head.current` is skipped and the backup stack is consulted directly.
pub fn next_candidate(head: &mut SearchHead, backups: &mut BackupStack, idx: &ClauseIndex, dead_end: bool) -> Next {
    let found = if dead_end { Vec::new() } else { find_complements(&head.current, idx) };
    let count = found.len();
    let mut found: VecDeque<Candidate> = found.into();
    match found.pop_front() {
        Some(candidate) => {
            let situation = if found.is_empty() { Situation::Single } else { Situation::Multiple { stashed: found.len() } };
            backups.push(head.clone(), found);
            Next::Candidate { candidate, situation, found: count }
        }
        None => match backups.pop_into(head) {
            Some(candidate) => Next::Candidate { candidate, situation: Situation::Backtracked, found: 0 },
            None => Next::Exhausted,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Literal, Term};

    fn lit(pred: &str, arg: &str, sign: Sign) -> Literal {
        let t = if arg.chars().next().unwrap().is_lowercase() { Term::var(arg) } else { Term::constant(arg) };
        Literal::new(pred, vec![t], sign)
    }

    fn dave() -> Vec<Clause> {
        use Sign::*;
        vec![
            Clause::new(vec![lit("Green", "x", Negative), lit("Nice", "x", Positive)], Origin::Premise(1)),
            Clause::new(vec![lit("Smart", "x", Negative), lit("Green", "x", Positive)], Origin::Premise(2)),
            Clause::unit(lit("Smart", "Dave", Positive), Origin::Premise(3)),
        ]
    }

    #[test]
    fn dave_buckets() {
        let idx = build_index(&dave());
        assert_eq!(idx.bucket("Nice", Sign::Positive), vec![(0, 1)]);
        assert_eq!(idx.bucket("Smart", Sign::Negative), vec![(1, 0)]);
        assert!(build_index(&[]).is_empty());
    }

    #[test]
    fn appended_clause_ranks_after_premises() {
        let mut idx = build_index(&dave());
        let id = idx.append(Clause::unit(lit("Smart", "Eve", Sign::Positive), Origin::Derived(1)));
        assert_eq!(id, 3);
        assert_eq!(idx.bucket("Smart", Sign::Positive), vec![(2, 0), (3, 0)]);
        assert_eq!(idx.derived_count(), 1);
        // a derived unit still outranks longer premises
        idx.append(Clause::unit(lit("Nice", "Eve", Sign::Positive), Origin::Derived(2)));
        assert_eq!(idx.bucket("Nice", Sign::Positive), vec![(4, 0), (0, 1)]);
    }

    #[test]
    fn repeated_predicate_in_one_clause() {
        let c = Clause::new(
            vec![lit("Red", "Anne", Sign::Positive), lit("Red", "Bob", Sign::Positive)],
            Origin::Premise(1),
        );
        let idx = build_index(&[c]);
        assert_eq!(idx.bucket("Red", Sign::Positive), vec![(0, 0), (0, 1)]);
    }

    #[test]
    fn first_resolution_candidate() {
        let idx = build_index(&dave());
        let current = Clause::unit(lit("Nice", "Dave", Sign::Negative), Origin::Query);
        let cands = find_complements(&current, &idx);
        assert_eq!(cands.len(), 1);
        assert_eq!(cands[0].origin, Origin::Premise(1));
        assert_eq!(cands[0].mgu.get("x"), Some(&Term::constant("Dave")));
    }

    #[test]
    fn no_candidate_for_positive_nice() {
        let idx = build_index(&dave());
        let current = Clause::unit(lit("Nice", "Dave", Sign::Positive), Origin::NegatedQuery);
        assert!(find_complements(&current, &idx).is_empty());
    }

    #[test]
    fn facts_come_before_rules() {
        let mut premises = dave();
        premises.push(Clause::new(
            vec![lit("Smart", "y", Sign::Positive), lit("Green", "y", Sign::Negative)],
            Origin::Premise(4),
        ));
        let idx = build_index(&premises);
        let current = Clause::unit(lit("Smart", "Dave", Sign::Negative), Origin::Derived(2));
        let cands = find_complements(&current, &idx);
        assert_eq!(cands.iter().map(|c| c.origin).collect::<Vec<_>>(), vec![Origin::Premise(3), Origin::Premise(4)]);
    }

    #[test]
    fn three_situations() {
        use Sign::*;
        let premises = vec![
            Clause::unit(lit("A", "K", Positive), Origin::Premise(1)),
            Clause::new(vec![lit("A", "x", Positive), lit("B", "x", Positive)], Origin::Premise(2)),
            Clause::new(vec![lit("A", "x", Positive), lit("C", "x", Positive)], Origin::Premise(3)),
        ];
        let idx = build_index(&premises);
        let mut backups = BackupStack::new();

        let mut head = SearchHead { current: Clause::unit(lit("A", "K", Negative), Origin::Query), depth: 0, parent_step: None };
        match next_candidate(&mut head, &mut backups, &idx, false) {
            Next::Candidate { candidate, situation, found } => {
                assert_eq!(found, 3);
                assert_eq!(situation, Situation::Multiple { stashed: 2 });
                assert_eq!(candidate.origin, Origin::Premise(1));
            }
            Next::Exhausted => panic!(),
        }
        assert_eq!(backups.stashed(), 2);

        let saved = head.clone();
        head = SearchHead { current: Clause::unit(lit("Z", "K", Negative), Origin::Derived(1)), depth: 1, parent_step: Some(1) };
        match next_candidate(&mut head, &mut backups, &idx, false) {
            Next::Candidate { candidate, situation, .. } => {
                assert_eq!(situation, Situation::Backtracked);
                assert_eq!(candidate.origin, Origin::Premise(2));
            }
            Next::Exhausted => panic!(),
        }
        assert_eq!(head, saved);
        assert_eq!(backups.stashed(), 1);

        let mut single = BackupStack::new();
        let mut h = SearchHead { current: Clause::unit(lit("B", "K", Negative), Origin::Query), depth: 0, parent_step: None };
        assert!(matches!(
            next_candidate(&mut h, &mut single, &idx, false),
            Next::Candidate { situation: Situation::Single, .. }
        ));
        assert!(single.is_empty());

        let mut empty = BackupStack::new();
        let mut h = SearchHead { current: Clause::unit(lit("Q", "K", Negative), Origin::Query), depth: 0, parent_step: None };
        assert_eq!(next_candidate(&mut h, &mut empty, &idx, false), Next::Exhausted);
    }
}
