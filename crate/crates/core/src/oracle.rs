//! Brute-force equality and cancellation oracle on finite homogeneous presentations.
//!
//! Independent of reversing: equality is decided by closing a word under
//! every relation applied anywhere in either direction. ℤ-indexed
//! presentations must be windowed first; a negative answer then only speaks
//! about the window.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::presentation::{Presentation, PresentationError};
use crate::words::{Generator, Letter, Word};

/// Default bound on the size of a single class.
pub const DEFAULT_CLASS_CAP: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("presentation `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("word `{0}` is not a positive word over the alphabet")]
    OutsideAlphabet(Word),
    #[error("class of `{0}` exceeds {1} members")]
    ClassTooLarge(Word, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceClass {
    pub representative: Word,
    pub members: BTreeSet<Word>,
}

impl EquivalenceClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.contains(w)
    }
}

/// The relations of a finite presentation as rewrite rules, both directions,
/// indexed by their first letter.
struct Rules {
    by_first: HashMap<Generator, Vec<(Vec<Letter>, Vec<Letter>)>>,
}

impl Rules {
    fn new(p: &Presentation) -> Result<Self, OracleError> {
        if !p.check_homogeneous() {
            return Err(OracleError::NotHomogeneous(p.name().to_string()));
        }
        let mut by_first: HashMap<Generator, Vec<_>> = HashMap::new();
        for inst in p.all_instances()? {
            let (l, r) = (inst.lhs.into_letters(), inst.rhs.into_letters());
            by_first.entry(l[0].gen).or_default().push((l.clone(), r.clone()));
            by_first.entry(r[0].gen).or_default().push((r, l));
        }
        Ok(Rules { by_first })
    }

    /// Every word one relation application away from `w`.
    fn neighbours(&self, w: &[Letter], mut f: impl FnMut(Vec<Letter>)) {
        for i in 0..w.len() {
            let Some(rules) = self.by_first.get(&w[i].gen) else { continue };
            for (from, to) in rules {
                if w[i..].starts_with(from) {
                    let mut next = Vec::with_capacity(w.len());
                    next.extend_from_slice(&w[..i]);
                    next.extend_from_slice(to);
                    next.extend_from_slice(&w[i + from.len()..]);
                    f(next);
                }
            }
        }
    }
}

fn check_word(p: &Presentation, w: &Word) -> Result<(), OracleError> {
    if w.is_positive() && p.contains_word(w) {
        Ok(())
    } else {
        Err(OracleError::OutsideAlphabet(w.clone()))
    }
}

fn closure(rules: &Rules, w: &Word, cap: usize, stop_at: Option<&Word>) -> Result<BTreeSet<Word>, OracleError> {
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.clone());
    queue.push_back(w.clone());
    while let Some(cur) = queue.pop_front() {
        if stop_at == Some(&cur) {
            break;
        }
        let mut overflow = false;
        rules.neighbours(cur.letters(), |next| {
            let next = Word::from(next);
            if !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
                overflow |= seen.len() > cap;
            }
        });
        if overflow {
            return Err(OracleError::ClassTooLarge(w.clone(), cap));
        }
    }
    Ok(seen)
}

pub fn equivalence_class_capped(w: &Word, p: &Presentation, cap: usize) -> Result<EquivalenceClass, OracleError> {
    check_word(p, w)?;
    let rules = Rules::new(p)?;
    Ok(EquivalenceClass {
        representative: w.clone(),
        members: closure(&rules, w, cap, None)?,
    })
}

/// All words equal to `w` in the finite monoid `p`.
pub fn equivalence_class(w: &Word, p: &Presentation) -> Result<EquivalenceClass, OracleError> {
    equivalence_class_capped(w, p, DEFAULT_CLASS_CAP)
}

pub fn monoid_equal(u: &Word, v: &Word, p: &Presentation) -> Result<bool, OracleError> {
    check_word(p, u)?;
    check_word(p, v)?;
    if u.len() != v.len() {
        return Ok(false);
    }
    let rules = Rules::new(p)?;
    Ok(closure(&rules, u, DEFAULT_CLASS_CAP, Some(v))?.contains(v))
}

/// Reusable equality checker for many queries over one presentation.
pub struct Oracle<'p> {
    pres: &'p Presentation,
    rules: Rules,
}

impl<'p> Oracle<'p> {
    pub fn new(pres: &'p Presentation) -> Result<Self, OracleError> {
        Ok(Oracle {
            pres,
            rules: Rules::new(pres)?,
        })
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool, OracleError> {
        check_word(self.pres, u)?;
        check_word(self.pres, v)?;
        if u.len() != v.len() {
            return Ok(false);
        }
        Ok(closure(&self.rules, u, DEFAULT_CLASS_CAP, Some(v))?.contains(v))
    }

    pub fn class(&self, w: &Word) -> Result<EquivalenceClass, OracleError> {
        check_word(self.pres, w)?;
        Ok(EquivalenceClass {
            representative: w.clone(),
            members: closure(&self.rules, w, DEFAULT_CLASS_CAP, None)?,
        })
    }

    /// A word one random relation application away, if any relation applies.
    pub fn random_neighbour(&self, w: &Word, pick: &mut dyn FnMut(usize) -> usize) -> Option<Word> {
        let mut all = Vec::new();
        self.rules.neighbours(w.letters(), |n| all.push(n));
        if all.is_empty() {
            None
        } else {
            let i = pick(all.len());
            Some(Word::from(all.swap_remove(i)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CancelSide {
    /// `a·x = a·y` but `x ≠ y`.
    Left,
    /// `x·a = y·a` but `x ≠ y`.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub side: CancelSide,
    pub letter: Generator,
    pub x: Word,
    pub y: Word,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub presentation: String,
    pub window: Option<i64>,
    pub max_len: usize,
    pub words_scanned: usize,
    pub counterexamples: Vec<Counterexample>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Looks for single-letter cancellation failures among words of length at
/// most `max_len`.
///
/// Every positive word of length up to `max_len + 1` gets a class id. For
/// each class and each letter `a`, the words `a·x` in it must have their
/// tails `x` in one class (left cancellation); symmetrically for `x·a`.
/// Each offending (class, letter) contributes one counterexample.
pub fn cancellation_scan(p: &Presentation, max_len: usize) -> Result<ScanReport, OracleError> {
    let rules = Rules::new(p)?;
    let gens = p.alphabet()?;
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..=max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                gens.iter().map(move |g| {
                    let mut n = w.clone();
                    n.push(g.pos());
                    n
                })
            })
            .collect();
        words.extend(layer.iter().cloned());
    }
    let index: HashMap<&[Letter], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let mut uf = UnionFind((0..words.len()).collect());
    for (i, w) in words.iter().enumerate() {
        rules.neighbours(w, |n| uf.union(i, index[n.as_slice()]));
    }

    let mut counterexamples = BTreeSet::new();
    // (class of the long word, letter, side) -> (class of the short word, short word)
    let mut seen: HashMap<(usize, Generator, CancelSide), (usize, usize)> = HashMap::new();
    for (i, w) in words.iter().enumerate().filter(|(_, w)| !w.is_empty()) {
        let whole = uf.find(i);
        let cuts = [
            (CancelSide::Left, w[0].gen, &w[1..]),
            (CancelSide::Right, w[w.len() - 1].gen, &w[..w.len() - 1]),
        ];
        for (side, letter, rest) in cuts {
            let j = index[rest];
            let part = uf.find(j);
            match seen.get(&(whole, letter, side)) {
                None => {
                    seen.insert((whole, letter, side), (part, j));
                }
                Some(&(other, k)) if other != part => {
                    counterexamples.insert(Counterexample {
                        side,
                        letter,
                        x: Word::from(words[k].clone()),
                        y: Word::from(rest.to_vec()),
                    });
                }
                _ => {}
            }
        }
    }
    Ok(ScanReport {
        presentation: p.name().to_string(),
        window: p.window(),
        max_len,
        words_scanned: words.len(),
        counterexamples: counterexamples.into_iter().collect(),
    })
}
