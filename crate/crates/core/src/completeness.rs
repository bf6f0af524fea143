//! Cube condition, triple enumeration and the certificates built on them.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::presentation::{Presentation, PresentationError, RelationInstance, Side};
use crate::reversing::{Recurrence, ReversalOutcome, ReversalTrace, Reverser};
use crate::words::{Generator, Word};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CubeResult {
    pub triple: (Word, Word, Word),
    pub side: Side,
    pub verdict: Verdict,
    /// The first reversal got stuck, so the implication was never exercised.
    pub stuck_hypothesis: bool,
    pub first: ReversalTrace,
    pub second: Option<ReversalTrace>,
    /// Proof that a fuel-exhausted reversal never terminates. On the first
    /// reversal it makes the implication vacuous; on the second it is a failure.
    pub recurrence: Option<Recurrence>,
}

impl CubeResult {
    /// Short description of why a non-passing result did not pass.
    pub fn reason(&self) -> String {
        let trace = self.second.as_ref().unwrap_or(&self.first);
        if let Some(rec) = &self.recurrence {
            let which = if self.second.is_some() { "second" } else { "first" };
            return format!("{which} reversal never terminates: {rec}");
        }
        match (&trace.outcome, self.stuck_hypothesis) {
            (_, true) => format!("stuck-hypothesis: first reversal {}", self.first.outcome),
            (ReversalOutcome::Terminal { .. }, _) => format!("second reversal ends at `{}`", trace.final_word),
            (outcome, _) => format!("{} reversal {outcome}", if self.second.is_some() { "second" } else { "first" }),
        }
    }
}

fn cube_first_word(side: Side, u: &Word, v: &Word, w: &Word) -> Word {
    match side {
        Side::Right => u.inverse().concat(w).concat(&w.inverse()).concat(v),
        Side::Left => u.concat(&w.inverse()).concat(w).concat(&v.inverse()),
    }
}

/// Right: reverse `u⁻¹ w w⁻¹ v` to `v' u'⁻¹`, then require
/// `(u v')⁻¹ (v u')` to reverse to ε. Left: reverse `u w⁻¹ w v⁻¹` to
/// `a⁻¹ b`, then require `(a u)(b v)⁻¹` to left-reverse to ε.
///
/// When the first reversal provably never terminates the implication holds
/// vacuously. The proof assumes `side` is complemented, which the
/// certifiers check before running cubes.
pub fn cube_with(
    rev: &Reverser<'_>,
    u: &Word,
    v: &Word,
    w: &Word,
    side: Side,
    fuel: usize,
) -> Result<CubeResult, PresentationError> {
    let start = cube_first_word(side, u, v, w);
    // a short probe catches the common non-terminating shapes without
    // spending the whole fuel first
    let probe = rev.reverse(side, &start, fuel.min(PROBE_STEPS))?;
    let triple = (u.clone(), v.clone(), w.clone());
    if let Some(rec) = find_recurrence(rev, &probe, fuel)? {
        return Ok(CubeResult {
            triple,
            side,
            verdict: Verdict::Pass,
            stuck_hypothesis: false,
            first: probe,
            second: None,
            recurrence: Some(rec),
        });
    }
    let first = if probe.outcome == (ReversalOutcome::Diverged { fuel: PROBE_STEPS }) {
        rev.reverse(side, &start, fuel)?
    } else {
        probe
    };
    let mut recurrence = None;
    let (verdict, stuck_hypothesis, second) = match first.outcome.parts() {
        Some((pos, neg)) => {
            let second_word = match side {
                Side::Right => u.concat(&pos).inverse().concat(&v.concat(&neg)),
                Side::Left => neg.concat(u).concat(&pos.concat(v).inverse()),
            };
            let second = rev.reverse(side, &second_word, fuel)?;
            let verdict = match second.outcome {
                ReversalOutcome::Empty => Verdict::Pass,
                ReversalOutcome::Diverged { .. } => {
                    recurrence = find_recurrence(rev, &second, fuel)?;
                    if recurrence.is_some() {
                        Verdict::Fail
                    } else {
                        Verdict::Inconclusive
                    }
                }
                _ => Verdict::Fail,
            };
            (verdict, false, Some(second))
        }
        None => match first.outcome {
            ReversalOutcome::Stuck { .. } => (Verdict::Fail, true, None),
            _ => {
                recurrence = find_recurrence(rev, &first, fuel)?;
                let verdict = if recurrence.is_some() {
                    Verdict::Pass
                } else {
                    Verdict::Inconclusive
                };
                (verdict, false, None)
            }
        },
    };
    Ok(CubeResult {
        triple,
        side,
        verdict,
        stuck_hypothesis,
        first,
        second,
        recurrence,
    })
}

const PROBE_STEPS: usize = 64;

/// Searches with a period bounded by `fuel`, so fuel caps every reversal run.
fn find_recurrence(
    rev: &Reverser<'_>,
    trace: &ReversalTrace,
    fuel: usize,
) -> Result<Option<Recurrence>, PresentationError> {
    rev.find_recurrence(trace, 24, 10, fuel.min(48))
}

pub fn cube_condition(
    u: &Word,
    v: &Word,
    w: &Word,
    p: &Presentation,
    side: Side,
    fuel: usize,
) -> Result<CubeResult, PresentationError> {
    cube_with(&Reverser::new(p), u, v, w, side, fuel)
}

pub type Triple = (Generator, Generator, Generator);

/// Ordered generator triples to check, in (family, index) lexicographic order.
///
/// On a shift-invariant presentation the ℤ-indexed letters range over
/// `[-t_bound, t_bound]` up to translation: each class is represented once,
/// by the triple whose smallest indexed letter is 0. Otherwise the indexed
/// letters simply range over `[-t_bound, t_bound]` (clipped to any window).
pub fn enumerate_generator_triples(p: &Presentation, t_bound: u32) -> Vec<Triple> {
    let k = i64::from(t_bound);
    let normalize = p.is_shift_invariant();
    let gens = if normalize {
        p.generators_in(0, 2 * k)
    } else {
        p.generators_in(-k, k)
    };
    let mut out = Vec::new();
    for &a in &gens {
        for &b in &gens {
            for &c in &gens {
                if normalize {
                    let min = [a, b, c].iter().filter(|g| g.is_indexed()).map(|g| g.index()).min();
                    if min.is_some_and(|m| m != 0) {
                        continue;
                    }
                }
                out.push((a, b, c));
            }
        }
    }
    out
}

/// All positive words of length `1..=max_len` over `gens`, shortest first.
pub fn positive_words(gens: &[Generator], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| gens.iter().map(move |&g| w.concat(&Word::positive([g]))))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    RightComplemented,
    LeftComplemented,
    CompleteUpTo { t_bound: u32, fuel: usize },
    CancellativeUpTo { t_bound: u32, fuel: usize },
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::RightComplemented => f.write_str("right-complemented"),
            Claim::LeftComplemented => f.write_str("left-complemented"),
            Claim::CompleteUpTo { t_bound, fuel } => write!(f, "complete-up-to({t_bound}, {fuel})"),
            Claim::CancellativeUpTo { t_bound, fuel } => write!(f, "cancellative-up-to({t_bound}, {fuel})"),
        }
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    NotHomogeneous,
    ComplementConflict {
        side: Side,
        pair: (Generator, Generator),
        relations: Vec<RelationInstance>,
    },
    CubeFailure {
        side: Side,
        triple: (Word, Word, Word),
        stuck_hypothesis: bool,
        reason: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub presentation: String,
    pub claim: Claim,
    pub established: bool,
    /// Sub-claims that hold; the main claim is listed last when established.
    pub holds: Vec<Claim>,
    pub t_bound: u32,
    pub fuel: usize,
    pub triples_checked: usize,
    /// Cube checks that ran out of fuel; they are not failures.
    pub triples_inconclusive: usize,
    /// Cube checks that hold because their first reversal provably never ends.
    pub vacuous_cubes: usize,
    pub failures: Vec<Witness>,
    pub refusal: Option<String>,
    pub tool_version: &'static str,
}

impl Certificate {
    fn new(p: &Presentation, claim: Claim, t_bound: u32, fuel: usize) -> Self {
        Certificate {
            presentation: p.name().to_string(),
            claim,
            established: false,
            holds: Vec::new(),
            t_bound,
            fuel,
            triples_checked: 0,
            triples_inconclusive: 0,
            vacuous_cubes: 0,
            failures: Vec::new(),
            refusal: None,
            tool_version: TOOL_VERSION,
        }
    }

    /// Pass when established with nothing left open, Inconclusive when only
    /// fuel stood in the way, Fail otherwise.
    pub fn verdict(&self) -> Verdict {
        if !self.failures.is_empty() || self.refusal.is_some() {
            Verdict::Fail
        } else if self.triples_inconclusive > 0 {
            Verdict::Inconclusive
        } else if self.established {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub t_bound: u32,
    pub fuel: usize,
    /// Check triples of positive words up to this length instead of generators.
    pub word_len: Option<usize>,
}

impl CertifyOptions {
    pub fn new(t_bound: u32, fuel: usize) -> Self {
        CertifyOptions {
            t_bound,
            fuel,
            word_len: None,
        }
    }
}

fn complement_witnesses(p: &Presentation) -> (Vec<Witness>, Vec<Claim>) {
    let mut witnesses = Vec::new();
    let mut holds = Vec::new();
    let (right, left) = p.check_complemented();
    for (report, claim) in [(right, Claim::RightComplemented), (left, Claim::LeftComplemented)] {
        if report.is_complemented() {
            holds.push(claim);
        }
        witnesses.extend(report.conflicts.into_iter().map(|c| Witness::ComplementConflict {
            side: report.side,
            pair: c.pair,
            relations: c.instances,
        }));
    }
    (witnesses, holds)
}

fn cube_triples(p: &Presentation, opts: &CertifyOptions) -> Vec<(Word, Word, Word)> {
    match opts.word_len {
        None => enumerate_generator_triples(p, opts.t_bound)
            .into_iter()
            .map(|(a, b, c)| (Word::positive([a]), Word::positive([b]), Word::positive([c])))
            .collect(),
        Some(len) => {
            let k = i64::from(opts.t_bound);
            let words = positive_words(&p.generators_in(-k, k), len);
            let mut out = Vec::new();
            for a in &words {
                for b in &words {
                    for c in &words {
                        out.push((a.clone(), b.clone(), c.clone()));
                    }
                }
            }
            out
        }
    }
}

/// Runs the cube condition on both sides for every enumerated triple and
/// folds the results in enumeration order.
fn run_cubes(p: &Presentation, opts: &CertifyOptions, cert: &mut Certificate) -> Result<(), PresentationError> {
    let triples = cube_triples(p, opts);
    let rev = Reverser::new(p);
    let results: Vec<[CubeResult; 2]> = triples
        .par_iter()
        .map(|(u, v, w)| {
            Ok([
                cube_with(&rev, u, v, w, Side::Right, opts.fuel)?,
                cube_with(&rev, u, v, w, Side::Left, opts.fuel)?,
            ])
        })
        .collect::<Result<_, PresentationError>>()?;
    cert.triples_checked = triples.len();
    for pair in &results {
        if pair.iter().any(|r| r.verdict == Verdict::Inconclusive) {
            cert.triples_inconclusive += 1;
        }
        cert.vacuous_cubes += pair
            .iter()
            .filter(|r| r.verdict == Verdict::Pass && r.recurrence.is_some())
            .count();
        for r in pair.iter().filter(|r| r.verdict == Verdict::Fail) {
            cert.failures.push(Witness::CubeFailure {
                side: r.side,
                triple: r.triple.clone(),
                stuck_hypothesis: r.stuck_hypothesis,
                reason: r.reason(),
            });
        }
    }
    Ok(())
}

/// Bounded completeness: every cube check passes or runs out of fuel.
///
/// Refused unless the presentation is homogeneous and complemented on both
/// sides, since the generator-triple reduction needs both.
pub fn certify_complete(p: &Presentation, opts: &CertifyOptions) -> Certificate {
    let claim = Claim::CompleteUpTo {
        t_bound: opts.t_bound,
        fuel: opts.fuel,
    };
    let mut cert = Certificate::new(p, claim, opts.t_bound, opts.fuel);
    if !p.check_homogeneous() {
        cert.refusal = Some("presentation is not homogeneous".into());
        cert.failures.push(Witness::NotHomogeneous);
        return cert;
    }
    let (witnesses, holds) = complement_witnesses(p);
    cert.holds = holds;
    if !witnesses.is_empty() {
        cert.refusal = Some("presentation is not complemented".into());
        cert.failures = witnesses;
        return cert;
    }
    if let Err(e) = run_cubes(p, opts, &mut cert) {
        cert.refusal = Some(e.to_string());
        return cert;
    }
    if cert.failures.is_empty() {
        cert.established = true;
        cert.holds.push(claim);
    }
    cert
}

/// Complemented, homogeneous and complete up to the bound, hence
/// cancellative on the checked range.
pub fn certify_cancellative(p: &Presentation, opts: &CertifyOptions) -> Certificate {
    let mut cert = certify_complete(p, opts);
    cert.claim = Claim::CancellativeUpTo {
        t_bound: opts.t_bound,
        fuel: opts.fuel,
    };
    if cert.established {
        cert.holds.push(cert.claim);
    }
    cert
}
