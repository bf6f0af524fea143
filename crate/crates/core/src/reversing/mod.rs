//! Right and left word reversing.
//!
//! Right reversing rewrites the leftmost `x⁻¹y` into `v'u'⁻¹` where
//! `x v' = y u'` is a relation, and deletes `x⁻¹x`. Left reversing is the
//! mirror image: the rightmost `x y⁻¹` becomes `v'⁻¹u'` where `v' x = u' y`.
//! Every run records its steps so it can be replayed, checked and drawn.

mod grid;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::RwLock;

use serde::Serialize;

use crate::presentation::{Complement, Presentation, PresentationError, RelationInstance, Side};
use crate::words::{Generator, Letter, Word};

pub use grid::{build_grid, grid_to_dot, EdgeKind, GridEdge, GridError, GridVertex, ReversingGrid};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepKind {
    /// `x⁻¹x` (right) or `x x⁻¹` (left) removed.
    Delete { generator: Generator },
    /// The two-letter redex replaced by the complements read off `relation`.
    Swap { relation: RelationInstance },
}

/// One rewrite acting on the two letters at `position` and `position + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReversalStep {
    pub position: usize,
    #[serde(flatten)]
    pub kind: StepKind,
}

impl ReversalStep {
    /// Letters that replace the redex.
    pub fn replacement(&self, side: Side) -> Vec<Letter> {
        match &self.kind {
            StepKind::Delete { .. } => Vec::new(),
            StepKind::Swap { relation } => {
                let (l, r) = (relation.lhs.letters(), relation.rhs.letters());
                match side {
                    Side::Right => {
                        let mut out = l[1..].to_vec();
                        out.extend(Word::from(r[1..].to_vec()).inverse().into_letters());
                        out
                    }
                    Side::Left => {
                        let mut out = Word::from(l[..l.len() - 1].to_vec()).inverse().into_letters();
                        out.extend_from_slice(&r[..r.len() - 1]);
                        out
                    }
                }
            }
        }
    }

    /// The two-letter redex this step consumes.
    pub fn redex(&self, side: Side) -> (Letter, Letter) {
        let (x, y) = match &self.kind {
            StepKind::Delete { generator } => (*generator, *generator),
            StepKind::Swap { relation } => match side {
                Side::Right => (relation.lhs.first().unwrap().gen, relation.rhs.first().unwrap().gen),
                Side::Left => (relation.lhs.last().unwrap().gen, relation.rhs.last().unwrap().gen),
            },
        };
        match side {
            Side::Right => (x.neg(), y.pos()),
            Side::Left => (x.pos(), y.neg()),
        }
    }

    pub fn apply(&self, side: Side, w: &Word) -> Word {
        w.splice(self.position, self.position + 2, &self.replacement(side))
    }

    /// The same step on the word shifted by `k`; `p` translates the bindings.
    pub fn shift(&self, p: &Presentation, k: i64) -> Self {
        let kind = match &self.kind {
            StepKind::Delete { generator } => StepKind::Delete {
                generator: generator.shifted(k),
            },
            StepKind::Swap { relation } => StepKind::Swap {
                relation: p.shift_instance(relation, k),
            },
        };
        ReversalStep {
            position: self.position,
            kind,
        }
    }
}

impl fmt::Display for ReversalStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StepKind::Delete { generator } => write!(f, "delete {generator} @{}", self.position),
            StepKind::Swap { relation } => {
                write!(f, "{} ({relation}) @{}", relation.origin, self.position)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Step(ReversalStep, Word),
    NoRedex,
    /// No relation relates the redex generators.
    Stuck { position: usize, pair: (Generator, Generator) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum ReversalOutcome {
    /// No redex left. Right: `positive · negative⁻¹`; left: `negative⁻¹ · positive`.
    Terminal { positive: Word, negative: Word },
    Empty,
    Stuck { position: usize, pair: (Generator, Generator) },
    Diverged { fuel: usize },
}

impl ReversalOutcome {
    pub fn is_empty(&self) -> bool {
        matches!(self, ReversalOutcome::Empty)
    }

    pub fn label(&self) -> &'static str {
        match self {
            ReversalOutcome::Terminal { .. } => "terminal",
            ReversalOutcome::Empty => "empty",
            ReversalOutcome::Stuck { .. } => "stuck",
            ReversalOutcome::Diverged { .. } => "diverged",
        }
    }

    /// Positive and negative parts of a finished reversal (`ε, ε` for Empty).
    pub fn parts(&self) -> Option<(Word, Word)> {
        match self {
            ReversalOutcome::Terminal { positive, negative } => Some((positive.clone(), negative.clone())),
            ReversalOutcome::Empty => Some((Word::empty(), Word::empty())),
            _ => None,
        }
    }
}

impl fmt::Display for ReversalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReversalOutcome::Terminal { positive, negative } => {
                write!(f, "terminal (positive part `{positive}`, negative part `{negative}`)")
            }
            ReversalOutcome::Empty => f.write_str("empty"),
            ReversalOutcome::Stuck { position, pair } => {
                write!(f, "stuck at @{position} on ({}, {})", pair.0, pair.1)
            }
            ReversalOutcome::Diverged { fuel } => write!(f, "diverged after {fuel} steps"),
        }
    }
}

/// A complete reversing run. Intermediate words are recovered by [`ReversalTrace::words`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReversalTrace {
    pub side: Side,
    pub start: Word,
    pub steps: Vec<ReversalStep>,
    pub final_word: Word,
    pub outcome: ReversalOutcome,
}

impl ReversalTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The start word followed by the word after each step.
    pub fn words(&self) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut w = self.start.clone();
        for step in &self.steps {
            let next = step.apply(self.side, &w);
            out.push(w);
            w = next;
        }
        out.push(w);
        out
    }

    pub fn swap_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.kind, StepKind::Swap { .. }))
            .count()
    }

    pub fn delete_count(&self) -> usize {
        self.steps.len() - self.swap_count()
    }

    /// Re-checks every step against `p`: the redex sits at the recorded
    /// position and each cited relation is the one `p` associates with it.
    pub fn check(&self, p: &Presentation) -> Result<(), String> {
        let mut w = self.start.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let (a, b) = step.redex(self.side);
            let found = w.letters().get(step.position..step.position + 2);
            if found != Some(&[a, b][..]) {
                return Err(format!("step {i}: redex {a} {b} not found @{} in {w}", step.position));
            }
            if let StepKind::Swap { relation } = &step.kind {
                let known = p.instances_for_pair(a.gen, b.gen, self.side);
                if !known.iter().any(|k| k.lhs == relation.lhs && k.rhs == relation.rhs) {
                    return Err(format!("step {i}: `{relation}` is not a relation of {}", p.name()));
                }
            }
            w = step.apply(self.side, &w);
        }
        if w != self.final_word {
            return Err(format!("replay ends at `{w}`, trace claims `{}`", self.final_word));
        }
        Ok(())
    }

    pub fn shift(&self, p: &Presentation, k: i64) -> Self {
        let outcome = match &self.outcome {
            ReversalOutcome::Terminal { positive, negative } => ReversalOutcome::Terminal {
                positive: positive.shift(k),
                negative: negative.shift(k),
            },
            ReversalOutcome::Stuck { position, pair } => ReversalOutcome::Stuck {
                position: *position,
                pair: (pair.0.shifted(k), pair.1.shifted(k)),
            },
            other => other.clone(),
        };
        ReversalTrace {
            side: self.side,
            start: self.start.shift(k),
            steps: self.steps.iter().map(|s| s.shift(p, k)).collect(),
            final_word: self.final_word.shift(k),
            outcome,
        }
    }
}

/// Proof that a reversal never terminates: `factor`, found in the word after
/// `at_step` steps, reverses in `period` steps to a word containing itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Recurrence {
    pub at_step: usize,
    pub factor: Word,
    pub period: usize,
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` recurs after {} steps", self.factor, self.period)
    }
}

fn contains_factor(hay: &[Letter], needle: &[Letter]) -> bool {
    hay.windows(needle.len()).any(|w| w == needle)
}

/// Leftmost `x⁻¹y` at or after `from`.
fn right_redex(letters: &[Letter], from: usize) -> Option<usize> {
    (from..letters.len().saturating_sub(1)).find(|&i| letters[i].is_negative() && letters[i + 1].is_positive())
}

/// Rightmost `x y⁻¹` starting at or before `upto`.
fn left_redex(letters: &[Letter], upto: usize) -> Option<usize> {
    let last = upto.min(letters.len().saturating_sub(2));
    if letters.len() < 2 {
        return None;
    }
    (0..=last).rev().find(|&i| letters[i].is_positive() && letters[i + 1].is_negative())
}

/// Splits a redex-free word into its positive and negative parts.
fn terminal(side: Side, w: &Word) -> ReversalOutcome {
    if w.is_empty() {
        return ReversalOutcome::Empty;
    }
    let letters = w.letters();
    let cut = letters.iter().position(|l| l.is_positive() != (side == Side::Right)).unwrap_or(letters.len());
    let (a, b) = (Word::from(letters[..cut].to_vec()), Word::from(letters[cut..].to_vec()));
    match side {
        Side::Right => ReversalOutcome::Terminal {
            positive: a,
            negative: b.inverse(),
        },
        Side::Left => ReversalOutcome::Terminal {
            positive: b,
            negative: a.inverse(),
        },
    }
}

/// Reverses words over one presentation, memoising complement lookups.
///
/// Lookups are shared behind a lock so one reverser can serve parallel
/// workers.
pub struct Reverser<'p> {
    pres: &'p Presentation,
    cache: RwLock<HashMap<(Side, Generator, Generator), Complement>>,
}

impl<'p> Reverser<'p> {
    pub fn new(pres: &'p Presentation) -> Self {
        Reverser {
            pres,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &'p Presentation {
        self.pres
    }

    pub fn complement(&self, side: Side, x: Generator, y: Generator) -> Result<Complement, PresentationError> {
        if let Some(c) = self.cache.read().unwrap().get(&(side, x, y)) {
            return Ok(c.clone());
        }
        let c = self.pres.complement(side, x, y)?;
        self.cache.write().unwrap().insert((side, x, y), c.clone());
        Ok(c)
    }

    fn step_at(&self, side: Side, w: &Word, pos: usize) -> Result<StepResult, PresentationError> {
        let letters = w.letters();
        let (x, y) = (letters[pos].gen, letters[pos + 1].gen);
        let kind = match self.complement(side, x, y)? {
            Complement::Equal => StepKind::Delete { generator: x },
            Complement::Pair { instance, .. } => StepKind::Swap { relation: instance },
            Complement::None => {
                return Ok(StepResult::Stuck {
                    position: pos,
                    pair: (x, y),
                })
            }
        };
        let step = ReversalStep { position: pos, kind };
        let next = step.apply(side, w);
        Ok(StepResult::Step(step, next))
    }

    /// One reversing step on the leftmost (right side) or rightmost (left side) redex.
    pub fn step(&self, side: Side, w: &Word) -> Result<StepResult, PresentationError> {
        let found = match side {
            Side::Right => right_redex(w.letters(), 0),
            Side::Left => left_redex(w.letters(), usize::MAX),
        };
        match found {
            Some(pos) => self.step_at(side, w, pos),
            None => Ok(StepResult::NoRedex),
        }
    }

    pub fn reverse(&self, side: Side, start: &Word, fuel: usize) -> Result<ReversalTrace, PresentationError> {
        let mut w = start.clone();
        let mut steps = Vec::new();
        // Everything left of the last rewrite (right of it, for left
        // reversing) stays redex-free, so the scan resumes next to it.
        let mut cursor = match side {
            Side::Right => 0,
            Side::Left => usize::MAX,
        };
        let outcome = loop {
            let found = match side {
                Side::Right => right_redex(w.letters(), cursor),
                Side::Left => left_redex(w.letters(), cursor),
            };
            let Some(pos) = found else {
                break terminal(side, &w);
            };
            if steps.len() == fuel {
                break ReversalOutcome::Diverged { fuel };
            }
            match self.step_at(side, &w, pos)? {
                StepResult::Step(step, next) => {
                    let added = step.replacement(side).len();
                    cursor = match side {
                        Side::Right => pos.saturating_sub(1),
                        Side::Left => pos + added,
                    };
                    steps.push(step);
                    w = next;
                }
                StepResult::Stuck { position, pair } => break ReversalOutcome::Stuck { position, pair },
                StepResult::NoRedex => unreachable!("a redex was located"),
            }
        };
        Ok(ReversalTrace {
            side,
            start: start.clone(),
            steps,
            final_word: w,
            outcome,
        })
    }

    /// Searches a diverged trace for a factor that reappears inside its own
    /// reversal, which proves the reversal never terminates.
    ///
    /// On a complemented presentation every complete reversal of a word has
    /// the same number of steps, and a factor needs no more steps than the
    /// word containing it. If `f` reverses in `n > 0` steps to a word
    /// containing `f`, a finite count for `f` would be strictly smaller than
    /// itself. Factors of up to `max_factor` letters are taken from the first
    /// `scan_words` words of the trace; each gets `max_period` steps.
    pub fn find_recurrence(
        &self,
        trace: &ReversalTrace,
        scan_words: usize,
        max_factor: usize,
        max_period: usize,
    ) -> Result<Option<Recurrence>, PresentationError> {
        if !matches!(trace.outcome, ReversalOutcome::Diverged { .. }) {
            return Ok(None);
        }
        let mut tried = HashSet::new();
        for (at_step, word) in trace.words().into_iter().take(scan_words).enumerate() {
            let letters = word.letters();
            for len in 2..=max_factor.min(letters.len()) {
                for start in 0..=letters.len() - len {
                    let factor = word.slice(start, start + len);
                    if !tried.insert(factor.clone()) || self.step(trace.side, &factor)? == StepResult::NoRedex {
                        continue;
                    }
                    let sub = self.reverse(trace.side, &factor, max_period)?;
                    let found = sub
                        .words()
                        .iter()
                        .skip(1)
                        .position(|later| contains_factor(later.letters(), factor.letters()));
                    if let Some(k) = found {
                        return Ok(Some(Recurrence {
                            at_step,
                            factor,
                            period: k + 1,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Right reversing of `u⁻¹v`.
    pub fn quotient(&self, u: &Word, v: &Word, fuel: usize) -> Result<ReversalTrace, PresentationError> {
        self.reverse(Side::Right, &u.inverse().concat(v), fuel)
    }
}

pub fn right_reverse_step(w: &Word, p: &Presentation) -> Result<StepResult, PresentationError> {
    Reverser::new(p).step(Side::Right, w)
}

pub fn left_reverse_step(w: &Word, p: &Presentation) -> Result<StepResult, PresentationError> {
    Reverser::new(p).step(Side::Left, w)
}

pub fn right_reverse(w: &Word, p: &Presentation, fuel: usize) -> Result<ReversalTrace, PresentationError> {
    Reverser::new(p).reverse(Side::Right, w, fuel)
}

pub fn left_reverse(w: &Word, p: &Presentation, fuel: usize) -> Result<ReversalTrace, PresentationError> {
    Reverser::new(p).reverse(Side::Left, w, fuel)
}

/// Right reversing of `u⁻¹v`; an Empty outcome proves `u = v` in the monoid.
pub fn reverse_quotient(u: &Word, v: &Word, p: &Presentation, fuel: usize) -> Result<ReversalTrace, PresentationError> {
    Reverser::new(p).quotient(u, v, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog_load;
    use crate::DEFAULT_FUEL;

    fn w(p: &Presentation, text: &str) -> Word {
        p.parse_word(text).unwrap()
    }

    #[test]
    fn worked_example_takes_three_steps() {
        let p = catalog_load("d4:new").unwrap();
        let tr = right_reverse(&w(&p, "t(2)^-1 s3 s3"), &p, DEFAULT_FUEL).unwrap();
        assert_eq!(tr.len(), 3);
        assert_eq!(tr.final_word.to_string(), "s3 t(2) t(2) s3^-1 t(2)^-1");
        assert_eq!((tr.swap_count(), tr.delete_count()), (2, 1));
        let words: Vec<String> = tr.words().iter().map(|w| w.to_string()).collect();
        assert_eq!(words[1], "s3 t(2) s3^-1 t(2)^-1 s3");
        tr.check(&p).unwrap();
    }

    #[test]
    fn first_step_of_the_example() {
        let p = catalog_load("d4:new").unwrap();
        match right_reverse_step(&w(&p, "t(2)^-1 s3 s3"), &p).unwrap() {
            StepResult::Step(step, next) => {
                assert_eq!(step.position, 0);
                assert_eq!(next.to_string(), "s3 t(2) s3^-1 t(2)^-1 s3");
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(right_reverse_step(&w(&p, "s3 t(2)"), &p).unwrap(), StepResult::NoRedex);
        match right_reverse_step(&w(&p, "s1^-1 s1"), &p).unwrap() {
            StepResult::Step(step, next) => {
                assert!(matches!(step.kind, StepKind::Delete { .. }));
                assert!(next.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stuck_on_unrelated_pair() {
        let p = catalog_load("affine-a:shi:3").unwrap();
        let tr = right_reverse(&w(&p, "t0^-1 t1"), &p, DEFAULT_FUEL).unwrap();
        let (t0, t1) = (Generator::finite('t', 0), Generator::finite('t', 1));
        assert_eq!(tr.outcome, ReversalOutcome::Stuck { position: 0, pair: (t0, t1) });
    }

    #[test]
    fn left_reversing_mirrors() {
        let p = catalog_load("d4:new").unwrap();
        let tr = left_reverse(&w(&p, "s1 s2^-1"), &p, DEFAULT_FUEL).unwrap();
        assert_eq!(tr.final_word.to_string(), "s2^-1 s1");
        assert_eq!(
            tr.outcome,
            ReversalOutcome::Terminal {
                positive: w(&p, "s1"),
                negative: w(&p, "s2")
            }
        );
        let u = w(&p, "s1 t(3) s2");
        let tr = left_reverse(&u.concat(&u.inverse()), &p, DEFAULT_FUEL).unwrap();
        assert!(tr.outcome.is_empty());
        tr.check(&p).unwrap();
    }

    #[test]
    fn quotients() {
        let p = catalog_load("d4:new").unwrap();
        let tr = reverse_quotient(&w(&p, "s1 t1 t0 s1 t1 t0"), &w(&p, "t1 t0 s1 t1 t0 s1"), &p, DEFAULT_FUEL).unwrap();
        assert!(tr.outcome.is_empty());
        tr.check(&p).unwrap();
        let tr = reverse_quotient(&w(&p, "s1"), &w(&p, "s2"), &p, DEFAULT_FUEL).unwrap();
        assert_eq!(tr.final_word.to_string(), "s2 s1^-1");
        assert!(reverse_quotient(&w(&p, "s1"), &w(&p, "s1"), &p, 1).unwrap().outcome.is_empty());
    }

    #[test]
    fn fuel_exhaustion_is_an_outcome() {
        let p = catalog_load("affine-a:classical:3").unwrap();
        let tr = right_reverse(&w(&p, "r1^-1 r2 r2^-1 r3"), &p, 50).unwrap();
        assert_eq!(tr.outcome, ReversalOutcome::Diverged { fuel: 50 });
        assert_eq!(tr.len(), 50);
        tr.check(&p).unwrap();
    }

    #[test]
    fn ambiguous_lookup_is_an_error() {
        let p = catalog_load("d4:yamada").unwrap();
        let err = right_reverse(&w(&p, "s1^-1 t1"), &p, DEFAULT_FUEL).unwrap_err();
        assert!(matches!(err, PresentationError::Ambiguous { .. }));
    }

    #[test]
    fn recurrence_proves_divergence() {
        let p = catalog_load("affine-a:classical:3").unwrap();
        let rev = Reverser::new(&p);
        let tr = rev.reverse(Side::Right, &w(&p, "r1^-1 r2 r2^-1 r3"), 50).unwrap();
        let rec = rev.find_recurrence(&tr, 16, 8, 32).unwrap().expect("a recurring factor");
        let again = rev.reverse(Side::Right, &rec.factor, rec.period).unwrap();
        assert!(contains_factor(again.final_word.letters(), rec.factor.letters()));
        // terminating runs never qualify
        let done = rev.reverse(Side::Right, &w(&p, "r1^-1 r2"), 50).unwrap();
        assert_eq!(rev.find_recurrence(&done, 16, 8, 32).unwrap(), None);
    }
}
