//! Text and JSON renderings of every result, paired with an exit status.

use serde_json::{json, Value};

use cubecheck::completeness::{Certificate, CubeResult, Verdict, Witness};
use cubecheck::derivation::DerivationReport;
use cubecheck::oracle::{CancelSide, ScanReport};
use cubecheck::reversing::{ReversalOutcome, ReversalTrace};
use cubecheck::{Presentation, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }
}

/// Finished reversals pass; stuck and fuel-exhausted ones are inconclusive.
impl From<&ReversalOutcome> for Status {
    fn from(o: &ReversalOutcome) -> Self {
        match o {
            ReversalOutcome::Terminal { .. } | ReversalOutcome::Empty => Status::Pass,
            ReversalOutcome::Stuck { .. } | ReversalOutcome::Diverged { .. } => Status::Inconclusive,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn new(status: Status, text: String, json: Value) -> Self {
        Report { status, text, json }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn presentation(p: &Presentation) -> Report {
    let (right, left) = p.check_complemented();
    let mut text = p.describe();
    text.push_str(&format!("  right: {}\n  left: {}\n", right.verdict(), left.verdict()));
    let families: Vec<Value> = p
        .families()
        .iter()
        .map(|f| json!({ "symbol": f.symbol.to_string(), "indexed": f.indices.is_empty(), "indices": f.indices }))
        .collect();
    let json = json!({
        "name": p.name(),
        "families": families,
        "schemas": p.schemas().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "window": p.window(),
        "homogeneous": p.check_homogeneous(),
        "right": right.verdict(),
        "left": left.verdict(),
    });
    Report::new(Status::Pass, text, json)
}

fn shown(w: &Word) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.to_string()
    }
}

/// One word per line, each followed by the step that produced the next.
pub fn trace_lines(trace: &ReversalTrace) -> String {
    let words: Vec<String> = trace.words().iter().map(shown).collect();
    let width = words.iter().map(|w| w.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (i, w) in words.iter().enumerate() {
        match trace.steps.get(i) {
            Some(step) => out.push_str(&format!("  {w:<width$}   {step}\n")),
            None => out.push_str(&format!("  {w}\n")),
        }
    }
    out
}

pub fn reversal(trace: &ReversalTrace) -> Report {
    let mut text = format!("{} reversing of {}\n", trace.side, trace.start);
    text.push_str(&trace_lines(trace));
    text.push_str(&format!("{} after {} steps: {}\n", trace.outcome.label(), trace.len(), shown(&trace.final_word)));
    Report::new(Status::from(&trace.outcome), text, to_value(trace))
}

pub fn quotient(u: &Word, v: &Word, trace: &ReversalTrace) -> Report {
    let (status, verdict) = match &trace.outcome {
        ReversalOutcome::Empty => (Status::Pass, "proved"),
        ReversalOutcome::Terminal { .. } => (Status::Fail, "not proved"),
        _ => (Status::Inconclusive, "inconclusive"),
    };
    let mut text = trace_lines(trace);
    text.push_str(&format!("{verdict}: {u} = {v} ({})\n", trace.outcome));
    let json = json!({ "u": u, "v": v, "verdict": verdict, "trace": trace });
    Report::new(status, text, json)
}

pub fn cube(r: &CubeResult) -> Report {
    let (u, v, w) = &r.triple;
    let mut text = format!("{} cube condition for (u, v, w) = ({u}, {v}, {w})\n", r.side);
    text.push_str("first reversal\n");
    text.push_str(&trace_lines(&r.first));
    text.push_str(&format!("  -> {}\n", r.first.outcome));
    if let Some(second) = &r.second {
        text.push_str("second reversal\n");
        text.push_str(&trace_lines(second));
        text.push_str(&format!("  -> {}\n", second.outcome));
    }
    if r.verdict == Verdict::Pass && r.recurrence.is_none() {
        text.push_str("pass\n");
    } else {
        text.push_str(&format!("{}: {}\n", r.verdict, r.reason()));
    }
    Report::new(Status::from(r.verdict), text, to_value(r))
}

fn witness_line(w: &Witness) -> String {
    match w {
        Witness::NotHomogeneous => "not homogeneous".into(),
        Witness::ComplementConflict { side, pair, relations } => {
            let rels: Vec<String> = relations.iter().map(|r| format!("{} ({r})", r.origin)).collect();
            format!("{side} complement conflict on ({}, {}): {}", pair.0, pair.1, rels.join(" vs "))
        }
        Witness::CubeFailure { side, triple, reason, .. } => {
            format!("{side} cube fails on ({}, {}, {}): {reason}", triple.0, triple.1, triple.2)
        }
    }
}

pub fn certificate(cert: &Certificate) -> Report {
    let holds: Vec<String> = cert.holds.iter().map(|c| c.to_string()).collect();
    let mut text = format!("certificate for {}\n", cert.presentation);
    text.push_str(&format!("  claim: {}\n", cert.claim));
    text.push_str(&format!("  verdict: {}\n", cert.verdict()));
    text.push_str(&format!("  holds: {}\n", if holds.is_empty() { "-".into() } else { holds.join(", ") }));
    text.push_str(&format!(
        "  triples checked: {} ({} inconclusive, {} vacuous cube checks)\n",
        cert.triples_checked, cert.triples_inconclusive, cert.vacuous_cubes
    ));
    if let Some(r) = &cert.refusal {
        text.push_str(&format!("  refused: {r}\n"));
    }
    for w in &cert.failures {
        text.push_str(&format!("  witness: {}\n", witness_line(w)));
    }
    Report::new(Status::from(cert.verdict()), text, to_value(cert))
}

pub fn derivation(rep: &DerivationReport) -> Report {
    let mut text = format!("derivation in {}\n", rep.presentation);
    for (i, w) in rep.words.iter().enumerate() {
        match rep.steps.get(i) {
            Some(step) => text.push_str(&format!("  {w}\n      {step}\n")),
            None => text.push_str(&format!("  {w}\n")),
        }
    }
    if rep.success {
        text.push_str(&format!("success: reached {}\n", rep.expected));
    } else {
        text.push_str(&format!("fail: ended at {}, expected {}\n", rep.final_word(), rep.expected));
    }
    let status = if rep.success { Status::Pass } else { Status::Fail };
    Report::new(status, text, to_value(rep))
}

pub fn scan(s: &ScanReport) -> Report {
    let mut text = format!(
        "cancellation scan of {} (window {}, max length {}): {} words, {} counterexamples\n",
        s.presentation,
        s.window.map_or("-".to_string(), |n| n.to_string()),
        s.max_len,
        s.words_scanned,
        s.counterexamples.len()
    );
    for c in &s.counterexamples {
        let line = match c.side {
            CancelSide::Left => format!("  left: {0} {1} = {0} {2}\n", c.letter, c.x, c.y),
            CancelSide::Right => format!("  right: {1} {0} = {2} {0}\n", c.letter, c.x, c.y),
        };
        text.push_str(&line);
    }
    let status = if s.counterexamples.is_empty() { Status::Pass } else { Status::Fail };
    Report::new(status, text, to_value(s))
}
