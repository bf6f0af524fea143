//! Replayable equational derivations and the `t(i)` substitution.
//!
//! A script is a start word, a list of rewrites and the word it must end
//! on. Rewrites cite a schema with explicit parameter values, so replay
//! re-derives each relation instead of trusting a transcribed word pair.
//!
//! ```text
//! presentation: d4:new
//! start: t1 t0 s1 t1 t0 s1
//! expect: s1 t1 t0 s1 t1 t0
//! rel R3 i=2,j=1 <- @0
//! cancel @3
//! insert t(0) @0
//! ```

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::presentation::{format_bindings, parse_bindings, Bindings, Presentation, PresentationError};
use crate::reversing::{reverse_quotient, ReversalTrace};
use crate::words::{FamilyKind, Generator, Letter, Word, WordError};

const P3_CHAIN: &str = include_str!("../scripts/p3-chain-s1.drv");

#[derive(Debug, Error)]
pub enum DerivationError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("expected `{expected}` @{position}, found `{found}`")]
    Mismatch {
        position: usize,
        expected: Word,
        found: Word,
    },
    #[error("instance of {0} is degenerate for these parameters")]
    Degenerate(String),
    #[error("step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<DerivationError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// lhs → rhs, written `->`.
    Forward,
    /// rhs → lhs, written `<-`.
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DerivationStep {
    Rel {
        schema: String,
        bindings: Bindings,
        direction: Direction,
        position: usize,
    },
    /// Removes the inverse pair at `position`.
    Cancel { position: usize },
    /// Inserts `letter · letter⁻¹` at `position`.
    Insert { letter: Letter, position: usize },
}

impl fmt::Display for DerivationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationStep::Rel {
                schema,
                bindings,
                direction,
                position,
            } => {
                let b = if bindings.is_empty() { "-".to_string() } else { format_bindings(bindings) };
                let d = match direction {
                    Direction::Forward => "->",
                    Direction::Backward => "<-",
                };
                write!(f, "rel {schema} {b} {d} @{position}")
            }
            DerivationStep::Cancel { position } => write!(f, "cancel @{position}"),
            DerivationStep::Insert { letter, position } => write!(f, "insert {letter} @{position}"),
        }
    }
}

pub fn apply_step(w: &Word, step: &DerivationStep, p: &Presentation) -> Result<Word, DerivationError> {
    match step {
        DerivationStep::Rel {
            schema,
            bindings,
            direction,
            position,
        } => {
            let sch = p
                .schema(schema)
                .ok_or_else(|| PresentationError::UnknownSchema(schema.clone()))?;
            let inst = sch
                .instantiate(bindings)?
                .ok_or_else(|| DerivationError::Degenerate(schema.clone()))?;
            let (from, to) = match direction {
                Direction::Forward => (&inst.lhs, &inst.rhs),
                Direction::Backward => (&inst.rhs, &inst.lhs),
            };
            let end = (position + from.len()).min(w.len());
            let found = w.slice((*position).min(end), end);
            if &found != from {
                return Err(DerivationError::Mismatch {
                    position: *position,
                    expected: from.clone(),
                    found,
                });
            }
            Ok(w.splice(*position, end, to.letters()))
        }
        DerivationStep::Cancel { position } => {
            let pair = w.letters().get(*position..position + 2);
            match pair {
                Some([a, b]) if *b == a.inverse() => Ok(w.splice(*position, position + 2, &[])),
                _ => {
                    let end = (position + 2).min(w.len());
                    let found = w.slice((*position).min(end), end);
                    let expected = match w.letters().get(*position) {
                        Some(&a) => Word::from(vec![a, a.inverse()]),
                        None => Word::empty(),
                    };
                    Err(DerivationError::Mismatch {
                        position: *position,
                        expected,
                        found,
                    })
                }
            }
        }
        DerivationStep::Insert { letter, position } => {
            if *position > w.len() {
                return Err(DerivationError::Mismatch {
                    position: *position,
                    expected: Word::empty(),
                    found: Word::empty(),
                });
            }
            Ok(w.splice(*position, *position, &[*letter, letter.inverse()]))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationScript {
    pub presentation: String,
    pub start: Word,
    pub steps: Vec<DerivationStep>,
    pub expected: Word,
}

/// Replay record: the word before and after every step.
#[derive(Debug, Clone, Serialize)]
pub struct DerivationReport {
    pub presentation: String,
    pub success: bool,
    pub words: Vec<Word>,
    pub steps: Vec<String>,
    pub expected: Word,
}

impl DerivationReport {
    pub fn final_word(&self) -> &Word {
        self.words.last().expect("at least the start word")
    }
}

fn parse_position(line: usize, tok: Option<&str>) -> Result<usize, DerivationError> {
    tok.and_then(|t| t.strip_prefix('@'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| DerivationError::Syntax {
            line,
            msg: "expected `@<position>`".into(),
        })
}

impl DerivationScript {
    /// Parses a script; `load` resolves the presentation named in the header.
    pub fn parse_with(
        text: &str,
        load: &dyn Fn(&str) -> Result<Presentation, PresentationError>,
    ) -> Result<(DerivationScript, Presentation), DerivationError> {
        let mut pres: Option<Presentation> = None;
        let mut start = None;
        let mut expected = None;
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |msg: &str| DerivationError::Syntax {
                line,
                msg: msg.to_string(),
            };
            if let Some(name) = content.strip_prefix("presentation:") {
                pres = Some(load(name.trim())?);
                continue;
            }
            let p = pres.as_ref().ok_or_else(|| syntax("`presentation:` must come first"))?;
            if let Some(w) = content.strip_prefix("start:") {
                start = Some(p.parse_word(w.trim())?);
            } else if let Some(w) = content.strip_prefix("expect:") {
                expected = Some(p.parse_word(w.trim())?);
            } else {
                let toks: Vec<&str> = content.split_whitespace().collect();
                let step = match toks.as_slice() {
                    ["rel", schema, bindings, dir, pos] => DerivationStep::Rel {
                        schema: schema.to_string(),
                        bindings: parse_bindings(bindings)?,
                        direction: match *dir {
                            "->" => Direction::Forward,
                            "<-" => Direction::Backward,
                            _ => return Err(syntax("direction must be `->` or `<-`")),
                        },
                        position: parse_position(line, Some(pos))?,
                    },
                    ["cancel", pos] => DerivationStep::Cancel {
                        position: parse_position(line, Some(pos))?,
                    },
                    ["insert", letter, pos] => DerivationStep::Insert {
                        letter: crate::words::parse_letter(letter, p)?,
                        position: parse_position(line, Some(pos))?,
                    },
                    _ => return Err(syntax("unrecognised step")),
                };
                steps.push(step);
            }
        }
        let missing = |what: &str| DerivationError::Syntax {
            line: 0,
            msg: format!("missing `{what}:` line"),
        };
        let p = pres.ok_or_else(|| missing("presentation"))?;
        let script = DerivationScript {
            presentation: p.name().to_string(),
            start: start.ok_or_else(|| missing("start"))?,
            steps,
            expected: expected.ok_or_else(|| missing("expect"))?,
        };
        Ok((script, p))
    }

    /// Parses a script over a catalog presentation.
    pub fn parse(text: &str) -> Result<(DerivationScript, Presentation), DerivationError> {
        Self::parse_with(text, &crate::presentation::catalog_load)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "presentation: {}\nstart: {}\nexpect: {}\n",
            self.presentation, self.start, self.expected
        );
        for step in &self.steps {
            out.push_str(&format!("{step}\n"));
        }
        out
    }

    /// Renames a finite generator throughout, including parameter values
    /// that select it.
    pub fn rename(&self, p: &Presentation, from: Generator, to: Generator) -> DerivationScript {
        let steps = self
            .steps
            .iter()
            .map(|st| match st {
                DerivationStep::Rel {
                    schema,
                    bindings,
                    direction,
                    position,
                } => {
                    let mut bindings = bindings.clone();
                    if let Some(sch) = p.schema(schema) {
                        for (param, value) in bindings.iter_mut() {
                            let fams = sch.parameter_families(*param);
                            if fams.len() == 1 && fams.contains(&from.family()) && *value == from.index() {
                                *value = to.index();
                            }
                        }
                    }
                    DerivationStep::Rel {
                        schema: schema.clone(),
                        bindings,
                        direction: *direction,
                        position: *position,
                    }
                }
                DerivationStep::Insert { letter, position } if letter.gen == from => DerivationStep::Insert {
                    letter: Letter::new(to, letter.sign),
                    position: *position,
                },
                other => other.clone(),
            })
            .collect();
        DerivationScript {
            presentation: self.presentation.clone(),
            start: self.start.rename(from, to),
            steps,
            expected: self.expected.rename(from, to),
        }
    }

    /// Translates every ℤ-indexed letter and parameter by `k`.
    pub fn shift(&self, p: &Presentation, k: i64) -> DerivationScript {
        let steps = self
            .steps
            .iter()
            .map(|st| match st {
                DerivationStep::Rel {
                    schema,
                    bindings,
                    direction,
                    position,
                } => DerivationStep::Rel {
                    schema: schema.clone(),
                    bindings: p
                        .schema(schema)
                        .map_or_else(|| bindings.clone(), |s| s.shift_bindings(bindings, k)),
                    direction: *direction,
                    position: *position,
                },
                DerivationStep::Insert { letter, position } => DerivationStep::Insert {
                    letter: letter.shifted(k),
                    position: *position,
                },
                other => other.clone(),
            })
            .collect();
        DerivationScript {
            presentation: self.presentation.clone(),
            start: self.start.shift(k),
            steps,
            expected: self.expected.shift(k),
        }
    }
}

/// Replays a script; the first failing step aborts with its index.
pub fn verify_script(sc: &DerivationScript, p: &Presentation) -> Result<DerivationReport, DerivationError> {
    let mut words = vec![sc.start.clone()];
    for (index, step) in sc.steps.iter().enumerate() {
        let next = apply_step(words.last().unwrap(), step, p).map_err(|e| DerivationError::Step {
            index,
            source: Box::new(e),
        })?;
        words.push(next);
    }
    Ok(DerivationReport {
        presentation: sc.presentation.clone(),
        success: words.last() == Some(&sc.expected),
        words,
        steps: sc.steps.iter().map(|s| s.to_string()).collect(),
        expected: sc.expected.clone(),
    })
}

/// The bundled chain `t1 t0 s(i) t1 t0 s(i) = s(i) t1 t0 s(i) t1 t0`.
pub fn p3_chain_script(i: i64) -> (DerivationScript, Presentation) {
    let (script, p) = DerivationScript::parse(P3_CHAIN).expect("bundled script parses");
    if i == 1 {
        return (script, p);
    }
    let renamed = script.rename(&p, Generator::finite('s', 1), Generator::finite('s', i));
    (renamed, p)
}

/// `t(i)` written over `t(0)`, `t(1)` and their inverses.
///
/// For `i ≥ 1` the flank is the alternating `t1 t0 t1 …` of length `i - 1`
/// and the middle letter is `t1` or `t0` by parity of `i`. For `i ≤ -1` the
/// relation `t(i) t(i-1) = t1 t0` is unfolded downwards,
/// `t(i-1) = t(i)⁻¹ t1 t0`, which gives the flank `t0⁻¹ t1⁻¹ t0⁻¹ …` of
/// length `|i|`.
pub fn t_expression(family: char, i: i64) -> Word {
    let t = |k: i64| Generator::indexed(family, k);
    let middle = t(i.rem_euclid(2));
    let flank: Word = if i >= 1 {
        (0..i - 1).map(|k| t(1 - k % 2).pos()).collect()
    } else {
        (0..-i).map(|k| t(k % 2).neg()).collect()
    };
    flank.concat(&Word::positive([middle])).concat(&flank.inverse())
}

/// Replaces every ℤ-indexed letter by its expression; other letters are kept.
pub fn substitute_t(w: &Word) -> Word {
    let mut out = Vec::new();
    for l in w.letters() {
        if l.gen.kind() == FamilyKind::Indexed {
            let e = t_expression(l.gen.family(), l.gen.index());
            let e = if l.is_positive() { e } else { e.inverse() };
            out.extend_from_slice(e.letters());
        } else {
            out.push(*l);
        }
    }
    Word::from(out)
}

/// `t(i) t(i-1)` becomes `t1 t0` after substitution and free reduction.
pub fn verify_translation_product(i: i64) -> bool {
    let t = |k: i64| Generator::indexed('t', k);
    let product = substitute_t(&Word::positive([t(i), t(i - 1)])).free_reduce();
    product == Word::positive([t(1), t(0)])
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", content = "trace", rename_all = "kebab-case")]
pub enum EqualityProof {
    Proved(ReversalTrace),
    NotProved(ReversalTrace),
}

impl EqualityProof {
    pub fn is_proved(&self) -> bool {
        matches!(self, EqualityProof::Proved(_))
    }

    pub fn trace(&self) -> &ReversalTrace {
        match self {
            EqualityProof::Proved(t) | EqualityProof::NotProved(t) => t,
        }
    }
}

/// `u = v` is proved when `u⁻¹v` reverses to ε.
pub fn verify_positive_equality(
    u: &Word,
    v: &Word,
    p: &Presentation,
    fuel: usize,
) -> Result<EqualityProof, PresentationError> {
    let trace = reverse_quotient(u, v, p, fuel)?;
    Ok(if trace.outcome.is_empty() {
        EqualityProof::Proved(trace)
    } else {
        EqualityProof::NotProved(trace)
    })
}

/// Reads `w` in `target`, where a family may be ℤ-indexed instead of finite.
fn carry_over(w: &Word, target: &Presentation) -> Option<Word> {
    w.letters()
        .iter()
        .map(|l| {
            let fam = target.family(l.gen.family())?;
            Some(Letter::new(Generator::new(fam.symbol, l.gen.index(), fam.kind), l.sign))
        })
        .collect()
}

/// Checks that every relation of the finite presentation `source` holds in
/// `target` by reversing, letters being identified by family and index.
/// Returns the relations that were not proved.
pub fn verify_relation_images(
    source: &Presentation,
    target: &Presentation,
    fuel: usize,
) -> Result<Vec<String>, PresentationError> {
    let mut missing = Vec::new();
    for inst in source.all_instances()? {
        let (Some(lhs), Some(rhs)) = (carry_over(&inst.lhs, target), carry_over(&inst.rhs, target)) else {
            missing.push(format!("{} ({inst}): letters outside {}", inst.origin, target.name()));
            continue;
        };
        if !verify_positive_equality(&lhs, &rhs, target, fuel)?.is_proved() {
            missing.push(format!("{} ({inst})", inst.origin));
        }
    }
    Ok(missing)
}
