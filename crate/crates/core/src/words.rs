//! Generators, signed letters and words over a finite-plus-ℤ-indexed alphabet.
//!
//! Words are written as whitespace separated letters. A letter is an atom
//! optionally followed by `^-1`; an atom is either `f(<int>)` or `f<digit>`
//! where `f` is a single lowercase family symbol. Generators of ℤ-indexed
//! families always format as `t(3)`, finite ones as `s3` (or `s(12)` when the
//! index is not a single digit).

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Whether a family ranges over a finite index set or over all of ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    Finite,
    Indexed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    family: char,
    index: i64,
    kind: FamilyKind,
}

impl Generator {
    pub const fn finite(family: char, index: i64) -> Self {
        Generator {
            family,
            index,
            kind: FamilyKind::Finite,
        }
    }

    pub const fn indexed(family: char, index: i64) -> Self {
        Generator {
            family,
            index,
            kind: FamilyKind::Indexed,
        }
    }

    pub const fn new(family: char, index: i64, kind: FamilyKind) -> Self {
        Generator {
            family,
            index,
            kind,
        }
    }

    pub fn family(&self) -> char {
        self.family
    }

    pub fn index(&self) -> i64 {
        self.index
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn is_indexed(&self) -> bool {
        self.kind == FamilyKind::Indexed
    }

    /// Translates ℤ-indexed generators by `k`; finite generators are fixed.
    pub fn shifted(self, k: i64) -> Self {
        match self.kind {
            FamilyKind::Indexed => Generator {
                index: self.index + k,
                ..self
            },
            FamilyKind::Finite => self,
        }
    }

    pub fn with_index(self, index: i64) -> Self {
        Generator { index, ..self }
    }

    pub fn pos(self) -> Letter {
        Letter::new(self, Sign::Pos)
    }

    pub fn neg(self) -> Letter {
        Letter::new(self, Sign::Neg)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::Finite if (0..=9).contains(&self.index) => {
                write!(f, "{}{}", self.family, self.index)
            }
            _ => write!(f, "{}({})", self.family, self.index),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Generator,
    pub sign: Sign,
}

impl Letter {
    pub const fn new(gen: Generator, sign: Sign) -> Self {
        Letter { gen, sign }
    }

    pub fn is_positive(&self) -> bool {
        self.sign == Sign::Pos
    }

    pub fn is_negative(&self) -> bool {
        self.sign == Sign::Neg
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            sign: self.sign.flip(),
        }
    }

    pub fn shifted(self, k: i64) -> Self {
        Letter {
            gen: self.gen.shifted(k),
            sign: self.sign,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "{}", self.gen),
            Sign::Neg => write!(f, "{}^-1", self.gen),
        }
    }
}

/// A finite sequence of signed letters; the empty word is ε.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Positive word spelled by `gens`.
    pub fn positive<I: IntoIterator<Item = Generator>>(gens: I) -> Self {
        Word(gens.into_iter().map(Generator::pos).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(Letter::is_positive)
    }

    pub fn first(&self) -> Option<&Letter> {
        self.0.first()
    }

    pub fn last(&self) -> Option<&Letter> {
        self.0.last()
    }

    /// Generators of the word, ignoring signs.
    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.0.iter().map(|l| l.gen)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Group inverse: reversed order, every sign flipped.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Free reduction by a single stack scan.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &letter in &self.0 {
            match stack.last() {
                Some(top) if top.cancels(&letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        Word(stack)
    }

    /// Applies the index translation `t(i) -> t(i + k)` to every ℤ-indexed letter.
    pub fn shift(&self, k: i64) -> Word {
        Word(self.0.iter().map(|l| l.shifted(k)).collect())
    }

    /// Replaces every occurrence of generator `from` by `to`, keeping signs.
    pub fn rename(&self, from: Generator, to: Generator) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| if l.gen == from { Letter::new(to, l.sign) } else { *l })
                .collect(),
        )
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Word with `self[start..end]` replaced by `replacement`.
    pub fn splice(&self, start: usize, end: usize, replacement: &[Letter]) -> Word {
        let mut letters = Vec::with_capacity(self.len() - (end - start) + replacement.len());
        letters.extend_from_slice(&self.0[..start]);
        letters.extend_from_slice(replacement);
        letters.extend_from_slice(&self.0[end..]);
        Word(letters)
    }

    /// Number of positive letters minus number of negative letters.
    pub fn exponent_sum(&self) -> i64 {
        self.0
            .iter()
            .map(|l| if l.is_positive() { 1 } else { -1 })
            .sum()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, letter) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Resolves family symbols while parsing.
pub trait Alphabet {
    fn family_kind(&self, family: char) -> Option<FamilyKind>;

    /// Whether `gen` is a member of the alphabet (range checks for finite families).
    fn contains(&self, gen: Generator) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("unknown generator family `{0}`")]
    UnknownFamily(char),
    #[error("generator `{0}` is outside the alphabet")]
    OutOfRange(Generator),
}

/// Splits a token into its family symbol and index without consulting an alphabet.
pub(crate) fn split_atom(atom: &str) -> Option<(char, &str)> {
    let mut chars = atom.chars();
    let family = chars.next().filter(|c| c.is_ascii_lowercase())?;
    let rest = chars.as_str();
    if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        return Some((family, inner));
    }
    if rest.len() == 1 && rest.as_bytes()[0].is_ascii_digit() {
        return Some((family, rest));
    }
    None
}

fn parse_int(text: &str) -> Option<i64> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

pub fn parse_letter<A: Alphabet + ?Sized>(token: &str, alphabet: &A) -> Result<Letter, WordError> {
    let malformed = || WordError::MalformedToken(token.to_string());
    let (atom, sign) = match token.strip_suffix("^-1") {
        Some(atom) => (atom, Sign::Neg),
        None => (token, Sign::Pos),
    };
    let (family, index) = split_atom(atom).ok_or_else(malformed)?;
    let index = parse_int(index).ok_or_else(malformed)?;
    let kind = alphabet
        .family_kind(family)
        .ok_or(WordError::UnknownFamily(family))?;
    let gen = Generator::new(family, index, kind);
    if !alphabet.contains(gen) {
        return Err(WordError::OutOfRange(gen));
    }
    Ok(Letter::new(gen, sign))
}

pub fn parse_word<A: Alphabet + ?Sized>(text: &str, alphabet: &A) -> Result<Word, WordError> {
    text.split_whitespace()
        .map(|token| parse_letter(token, alphabet))
        .collect()
}

pub fn format_word(word: &Word) -> String {
    word.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    struct TestAlphabet;

    impl Alphabet for TestAlphabet {
        fn family_kind(&self, family: char) -> Option<FamilyKind> {
            match family {
                't' => Some(FamilyKind::Indexed),
                's' => Some(FamilyKind::Finite),
                _ => None,
            }
        }

        fn contains(&self, gen: Generator) -> bool {
            gen.is_indexed() || (1..=4).contains(&gen.index())
        }
    }

    fn t(i: i64) -> Generator {
        Generator::indexed('t', i)
    }

    fn s(i: i64) -> Generator {
        Generator::finite('s', i)
    }

    #[test]
    fn parses_mixed_word() {
        let w = parse_word("t(2)^-1 s3 s3", &TestAlphabet).unwrap();
        assert_eq!(w, Word::from_letters(vec![t(2).neg(), s(3).pos(), s(3).pos()]));
        assert_eq!(parse_word("", &TestAlphabet).unwrap(), Word::empty());
        assert_eq!(parse_word("s(3) t(-4)", &TestAlphabet).unwrap().to_string(), "s3 t(-4)");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_word("s9", &TestAlphabet), Err(WordError::OutOfRange(s(9))));
        assert_eq!(parse_word("q1", &TestAlphabet), Err(WordError::UnknownFamily('q')));
        for bad in ["s12", "t(", "t()", "t(1", "s", "S1", "t(--1)", "s1^-2", "t(+1)"] {
            assert!(
                matches!(parse_word(bad, &TestAlphabet), Err(WordError::MalformedToken(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn formats_canonically() {
        let w = Word::from_letters(vec![s(3).pos(), t(2).pos(), t(2).pos(), s(3).neg(), t(2).neg()]);
        assert_eq!(format_word(&w), "s3 t(2) t(2) s3^-1 t(2)^-1");
        assert_eq!(format_word(&Word::empty()), "");
        assert_eq!(format_word(&Word::positive([t(-1)])), "t(-1)");
        assert_eq!(Generator::finite('s', 12).to_string(), "s(12)");
    }

    #[test]
    fn inverse_and_reduction() {
        let w = Word::positive([t(1), t(0)]);
        assert_eq!(w.inverse(), Word::from_letters(vec![t(0).neg(), t(1).neg()]));
        assert_eq!(Word::empty().inverse(), Word::empty());

        let w = Word::from_letters(vec![t(0).neg(), t(1).neg(), t(1).pos(), t(0).pos()]);
        assert_eq!(w.free_reduce(), Word::empty());

        let w = Word::from_letters(vec![
            t(1).pos(),
            t(0).pos(),
            t(1).pos(),
            t(0).neg(),
            t(1).neg(),
            t(1).pos(),
            t(0).pos(),
            t(1).neg(),
        ]);
        assert_eq!(w.free_reduce(), Word::positive([t(1), t(0)]));

        let reduced = Word::from_letters(vec![s(1).pos(), t(0).neg(), s(1).pos()]);
        assert_eq!(reduced.free_reduce(), reduced);
    }

    #[test]
    fn shift_moves_only_indexed_letters() {
        let w = Word::positive([t(2), s(3)]);
        assert_eq!(w.shift(3), Word::positive([t(5), s(3)]));
        assert_eq!(w.shift(0), w);
    }
}
