//! Parametric relation schemas.
//!
//! A schema is a pair of letter templates whose indices are either constants
//! or `param ± offset`. Integer parameters range over ℤ; finite parameters
//! range over an explicit value set. Instances are never enumerated globally:
//! lookups go through the leading (or trailing) letters of both sides, which
//! pin every integer parameter.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{PresentationError, Side};
use crate::words::{split_atom, FamilyKind, Generator, Letter, Word};

pub type Bindings = BTreeMap<char, i64>;

pub fn format_bindings(bindings: &Bindings) -> String {
    bindings
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_bindings(text: &str) -> Result<Bindings, PresentationError> {
    let bad = || PresentationError::Syntax(format!("malformed bindings `{text}`"));
    let mut bindings = Bindings::new();
    if text == "-" {
        return Ok(bindings);
    }
    for part in text.split(',') {
        let (name, value) = part.split_once('=').ok_or_else(bad)?;
        let mut chars = name.chars();
        let param = chars.next().filter(|c| c.is_ascii_lowercase()).ok_or_else(bad)?;
        if chars.next().is_some() {
            return Err(bad());
        }
        let value: i64 = value.parse().map_err(|_| bad())?;
        if bindings.insert(param, value).is_some() {
            return Err(bad());
        }
    }
    Ok(bindings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexExpr {
    Const(i64),
    Param { name: char, offset: i64 },
}

impl IndexExpr {
    fn eval(&self, bindings: &Bindings) -> Option<i64> {
        match *self {
            IndexExpr::Const(c) => Some(c),
            IndexExpr::Param { name, offset } => bindings.get(&name).map(|v| v + offset),
        }
    }

    fn param(&self) -> Option<char> {
        match *self {
            IndexExpr::Param { name, .. } => Some(name),
            IndexExpr::Const(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TemplateLetter {
    pub family: char,
    pub kind: FamilyKind,
    pub index: IndexExpr,
}

impl TemplateLetter {
    fn eval(&self, bindings: &Bindings) -> Option<Generator> {
        self.index
            .eval(bindings)
            .map(|i| Generator::new(self.family, i, self.kind))
    }
}

impl fmt::Display for TemplateLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            IndexExpr::Const(c) => write!(f, "{}", Generator::new(self.family, c, self.kind)),
            IndexExpr::Param { name, offset: 0 } => write!(f, "{}({name})", self.family),
            IndexExpr::Param { name, offset } if offset > 0 => {
                write!(f, "{}({name}+{offset})", self.family)
            }
            IndexExpr::Param { name, offset } => write!(f, "{}({name}{offset})", self.family),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamDomain {
    Integers,
    Values(BTreeSet<i64>),
}

impl ParamDomain {
    fn contains(&self, v: i64) -> bool {
        match self {
            ParamDomain::Integers => true,
            ParamDomain::Values(set) => set.contains(&v),
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self, ParamDomain::Integers)
    }
}

/// Where an instance came from: schema name plus parameter values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Origin {
    pub schema: Arc<str>,
    pub bindings: Bindings,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bindings.is_empty() {
            write!(f, "{}", self.schema)
        } else {
            write!(f, "{} {}", self.schema, format_bindings(&self.bindings))
        }
    }
}

/// A concrete relation `lhs = rhs`, oriented for the lookup that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RelationInstance {
    pub lhs: Word,
    pub rhs: Word,
    pub origin: Origin,
}

impl RelationInstance {
    pub fn flipped(&self) -> Self {
        RelationInstance {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            origin: self.origin.clone(),
        }
    }

    pub fn same_relation(&self, other: &RelationInstance) -> bool {
        (self.lhs == other.lhs && self.rhs == other.rhs)
            || (self.lhs == other.rhs && self.rhs == other.lhs)
    }

    /// Orientation-independent identity of the relation.
    pub(crate) fn unordered_key(&self) -> (Word, Word) {
        if self.lhs <= self.rhs {
            (self.lhs.clone(), self.rhs.clone())
        } else {
            (self.rhs.clone(), self.lhs.clone())
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.lhs.generators().chain(self.rhs.generators())
    }

    pub fn shift(&self, k: i64) -> Self {
        RelationInstance {
            lhs: self.lhs.shift(k),
            rhs: self.rhs.shift(k),
            origin: self.origin.clone(),
        }
    }
}

impl fmt::Display for RelationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone)]
pub struct RelationSchema {
    name: Arc<str>,
    lhs: Vec<TemplateLetter>,
    rhs: Vec<TemplateLetter>,
    domains: BTreeMap<char, ParamDomain>,
}

impl RelationSchema {
    pub fn new(
        name: &str,
        lhs: Vec<TemplateLetter>,
        rhs: Vec<TemplateLetter>,
        domains: BTreeMap<char, ParamDomain>,
    ) -> Result<Self, PresentationError> {
        let schema = RelationSchema {
            name: Arc::from(name),
            lhs,
            rhs,
            domains,
        };
        schema.validate()?;
        Ok(schema)
    }

    /// Parses `lhs = rhs` where letters may carry `param ± offset` indices.
    ///
    /// `families` reports the kind of a family symbol and, for finite
    /// families, its index range; parameter domains are inferred from it.
    pub fn parse(
        name: &str,
        text: &str,
        families: &dyn Fn(char) -> Option<(FamilyKind, Option<BTreeSet<i64>>)>,
    ) -> Result<Self, PresentationError> {
        let (l, r) = text
            .split_once('=')
            .ok_or_else(|| PresentationError::Syntax(format!("relation `{text}` lacks `=`")))?;
        let mut domains: BTreeMap<char, ParamDomain> = BTreeMap::new();
        let mut side = |part: &str| -> Result<Vec<TemplateLetter>, PresentationError> {
            part.split_whitespace()
                .map(|tok| parse_template_letter(tok, families, &mut domains))
                .collect()
        };
        let lhs = side(l)?;
        let rhs = side(r)?;
        Self::new(name, lhs, rhs, domains)
    }

    /// Restricts a parameter to the given values.
    pub fn restrict(mut self, param: char, values: impl IntoIterator<Item = i64>) -> Self {
        let values: BTreeSet<i64> = values.into_iter().collect();
        let domain = match self.domains.get(&param) {
            Some(ParamDomain::Values(old)) => old.intersection(&values).copied().collect(),
            _ => values,
        };
        self.domains.insert(param, ParamDomain::Values(domain));
        self
    }

    fn validate(&self) -> Result<(), PresentationError> {
        let err = |msg: String| Err(PresentationError::Schema(self.name.to_string(), msg));
        if self.lhs.is_empty() || self.rhs.is_empty() {
            return err("both sides must be non-empty".into());
        }
        let used: BTreeSet<char> = self.letters().filter_map(|l| l.index.param()).collect();
        for p in &used {
            if !self.domains.contains_key(p) {
                return err(format!("parameter `{p}` has no domain"));
            }
        }
        for p in self.domains.keys() {
            if !used.contains(p) {
                return err(format!("parameter `{p}` does not occur"));
            }
        }
        let pinned = |a: &TemplateLetter, b: &TemplateLetter| -> BTreeSet<char> {
            [a.index.param(), b.index.param()].into_iter().flatten().collect()
        };
        let front = pinned(&self.lhs[0], &self.rhs[0]);
        let back = pinned(self.lhs.last().unwrap(), self.rhs.last().unwrap());
        for (p, d) in &self.domains {
            if d.is_integers() && !(front.contains(p) && back.contains(p)) {
                return err(format!(
                    "integer parameter `{p}` must occur in the first and last letters"
                ));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parameters(&self) -> impl Iterator<Item = (&char, &ParamDomain)> {
        self.domains.iter()
    }

    pub fn domain(&self, param: char) -> Option<&ParamDomain> {
        self.domains.get(&param)
    }

    fn letters(&self) -> impl Iterator<Item = &TemplateLetter> {
        self.lhs.iter().chain(self.rhs.iter())
    }

    pub fn side_lengths(&self) -> (usize, usize) {
        (self.lhs.len(), self.rhs.len())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.lhs.len() == self.rhs.len()
    }

    /// No constant index on a ℤ-indexed letter and no finite parameter feeding one.
    pub fn is_shift_invariant(&self) -> bool {
        self.letters()
            .filter(|l| l.kind == FamilyKind::Indexed)
            .all(|l| match l.index {
                IndexExpr::Const(_) => false,
                IndexExpr::Param { name, .. } => self.domains[&name].is_integers(),
            })
    }

    /// Largest absolute constant that can appear as an index of a ℤ-indexed letter.
    pub(crate) fn indexed_constant_bound(&self) -> i64 {
        self.letters()
            .filter(|l| l.kind == FamilyKind::Indexed)
            .map(|l| match l.index {
                IndexExpr::Const(c) => c.abs(),
                IndexExpr::Param { name, offset } => match &self.domains[&name] {
                    ParamDomain::Integers => 0,
                    ParamDomain::Values(vs) => vs.iter().map(|v| (v + offset).abs()).max().unwrap_or(0),
                },
            })
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn offset_bound(&self) -> i64 {
        self.letters()
            .filter_map(|l| match l.index {
                IndexExpr::Param { offset, .. } => Some(offset.abs()),
                IndexExpr::Const(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn template_letters(&self) -> impl Iterator<Item = &TemplateLetter> {
        self.letters()
    }

    /// The instance for fixed parameter values; `None` when both sides coincide.
    pub fn instantiate(&self, bindings: &Bindings) -> Result<Option<RelationInstance>, PresentationError> {
        for (p, d) in &self.domains {
            match bindings.get(p) {
                None => {
                    return Err(PresentationError::Binding(format!(
                        "{}: parameter `{p}` is unbound",
                        self.name
                    )))
                }
                Some(&v) if !d.contains(v) => {
                    return Err(PresentationError::Binding(format!(
                        "{}: {p}={v} is outside the parameter domain",
                        self.name
                    )))
                }
                _ => {}
            }
        }
        if let Some(extra) = bindings.keys().find(|k| !self.domains.contains_key(k)) {
            return Err(PresentationError::Binding(format!(
                "{}: unknown parameter `{extra}`",
                self.name
            )));
        }
        Ok(self.build(bindings))
    }

    fn build(&self, bindings: &Bindings) -> Option<RelationInstance> {
        let side = |t: &[TemplateLetter]| -> Word {
            t.iter()
                .map(|l| Letter::new(l.eval(bindings).expect("bound"), crate::words::Sign::Pos))
                .collect()
        };
        let lhs = side(&self.lhs);
        let rhs = side(&self.rhs);
        if lhs == rhs {
            return None;
        }
        Some(RelationInstance {
            lhs,
            rhs,
            origin: Origin {
                schema: self.name.clone(),
                bindings: bindings.clone(),
            },
        })
    }

    fn bind(&self, letter: &TemplateLetter, gen: Generator, bindings: &mut Bindings) -> bool {
        if letter.family != gen.family() || letter.kind != gen.kind() {
            return false;
        }
        match letter.index {
            IndexExpr::Const(c) => c == gen.index(),
            IndexExpr::Param { name, offset } => {
                let v = gen.index() - offset;
                match bindings.get(&name) {
                    Some(&bound) => bound == v,
                    None if self.domains[&name].contains(v) => {
                        bindings.insert(name, v);
                        true
                    }
                    None => false,
                }
            }
        }
    }

    /// Calls `f` on every completion of `bindings` over the unbound finite parameters.
    fn complete(&self, bindings: &mut Bindings, f: &mut dyn FnMut(&Bindings)) {
        let free = self
            .domains
            .iter()
            .find(|(p, _)| !bindings.contains_key(p));
        match free {
            None => f(bindings),
            Some((&p, ParamDomain::Values(values))) => {
                for &v in values {
                    bindings.insert(p, v);
                    self.complete(bindings, f);
                }
                bindings.remove(&p);
            }
            Some((_, ParamDomain::Integers)) => {
                unreachable!("integer parameters are pinned by the boundary letters")
            }
        }
    }

    /// Instances with one side starting (right) or ending (left) with `x` and
    /// the other with `y`, oriented so that `lhs` carries `x`.
    pub fn instances_at(&self, side: Side, x: Generator, y: Generator) -> Vec<RelationInstance> {
        let mut out = Vec::new();
        for flip in [false, true] {
            let (a, b) = if flip { (&self.rhs, &self.lhs) } else { (&self.lhs, &self.rhs) };
            let (la, lb) = match side {
                Side::Right => (&a[0], &b[0]),
                Side::Left => (a.last().unwrap(), b.last().unwrap()),
            };
            let mut bindings = Bindings::new();
            if !self.bind(la, x, &mut bindings) || !self.bind(lb, y, &mut bindings) {
                continue;
            }
            self.complete(&mut bindings, &mut |b| {
                if let Some(inst) = self.build(b) {
                    out.push(if flip { inst.flipped() } else { inst });
                }
            });
        }
        out
    }

    /// Every instance all of whose ℤ-indexed letters lie in `[lo, hi]`.
    pub fn instances_within(&self, lo: i64, hi: i64) -> Vec<RelationInstance> {
        let margin = self.offset_bound();
        let mut out = Vec::new();
        let int_params: Vec<char> = self
            .domains
            .iter()
            .filter(|(_, d)| d.is_integers())
            .map(|(p, _)| *p)
            .collect();
        let mut bindings = Bindings::new();
        self.each_integer_assignment(&int_params, lo - margin, hi + margin, &mut bindings, &mut |b| {
            let mut b = b.clone();
            self.complete(&mut b, &mut |full| {
                if let Some(inst) = self.build(full) {
                    let inside = inst
                        .generators()
                        .all(|g| !g.is_indexed() || (lo..=hi).contains(&g.index()));
                    if inside {
                        out.push(inst);
                    }
                }
            });
        });
        out
    }

    fn each_integer_assignment(
        &self,
        params: &[char],
        lo: i64,
        hi: i64,
        bindings: &mut Bindings,
        f: &mut dyn FnMut(&Bindings),
    ) {
        match params.split_first() {
            None => f(bindings),
            Some((&p, rest)) => {
                for v in lo..=hi {
                    bindings.insert(p, v);
                    self.each_integer_assignment(rest, lo, hi, bindings, f);
                }
                bindings.remove(&p);
            }
        }
    }

    /// Bindings translated along with a shift of every ℤ-indexed letter by `k`.
    pub fn shift_bindings(&self, bindings: &Bindings, k: i64) -> Bindings {
        bindings
            .iter()
            .map(|(&p, &v)| match self.domains.get(&p) {
                Some(ParamDomain::Integers) => (p, v + k),
                _ => (p, v),
            })
            .collect()
    }

    /// Families of the letters a parameter feeds into.
    pub fn parameter_families(&self, param: char) -> BTreeSet<char> {
        self.letters()
            .filter(|l| l.index.param() == Some(param))
            .map(|l| l.family)
            .collect()
    }
}

impl fmt::Display for RelationSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |t: &[TemplateLetter]| {
            t.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
        };
        write!(f, "{}: {} = {}", self.name, side(&self.lhs), side(&self.rhs))?;
        for (p, d) in &self.domains {
            match d {
                ParamDomain::Integers => write!(f, "  [{p} ∈ ℤ]")?,
                ParamDomain::Values(vs) => {
                    let vs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                    write!(f, "  [{p} ∈ {{{}}}]", vs.join(","))?
                }
            }
        }
        Ok(())
    }
}

fn parse_index_expr(text: &str) -> Option<IndexExpr> {
    let is_int = |s: &str| {
        let d = s.strip_prefix('-').unwrap_or(s);
        !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())
    };
    if is_int(text) {
        return text.parse().ok().map(IndexExpr::Const);
    }
    let mut chars = text.chars();
    let name = chars.next().filter(|c| c.is_ascii_lowercase())?;
    let rest = chars.as_str();
    let offset = if rest.is_empty() {
        0
    } else {
        let (sign, digits) = rest.split_at(1);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let v: i64 = digits.parse().ok()?;
        match sign {
            "+" => v,
            "-" => -v,
            _ => return None,
        }
    };
    Some(IndexExpr::Param { name, offset })
}

fn parse_template_letter(
    token: &str,
    families: &dyn Fn(char) -> Option<(FamilyKind, Option<BTreeSet<i64>>)>,
    domains: &mut BTreeMap<char, ParamDomain>,
) -> Result<TemplateLetter, PresentationError> {
    let malformed = || PresentationError::Syntax(format!("malformed template letter `{token}`"));
    let (family, inner) = split_atom(token).ok_or_else(malformed)?;
    let index = parse_index_expr(inner).ok_or_else(malformed)?;
    let (kind, range) = families(family).ok_or_else(|| {
        PresentationError::Syntax(format!("unknown generator family `{family}` in `{token}`"))
    })?;
    match index {
        IndexExpr::Const(c) => {
            if let Some(range) = &range {
                if !range.contains(&c) {
                    return Err(PresentationError::Syntax(format!(
                        "`{token}` is outside the family's index range"
                    )));
                }
            }
        }
        IndexExpr::Param { name, offset } => {
            let entry = domains.entry(name).or_insert(ParamDomain::Integers);
            if let Some(range) = range {
                let shifted: BTreeSet<i64> = range.iter().map(|v| v - offset).collect();
                *entry = match entry {
                    ParamDomain::Integers => ParamDomain::Values(shifted),
                    ParamDomain::Values(old) => {
                        ParamDomain::Values(old.intersection(&shifted).copied().collect())
                    }
                };
            }
        }
    }
    Ok(TemplateLetter {
        family,
        kind,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fams(c: char) -> Option<(FamilyKind, Option<BTreeSet<i64>>)> {
        match c {
            't' => Some((FamilyKind::Indexed, None)),
            's' => Some((FamilyKind::Finite, Some((1..=4).collect()))),
            _ => None,
        }
    }

    fn t(i: i64) -> Generator {
        Generator::indexed('t', i)
    }

    fn s(i: i64) -> Generator {
        Generator::finite('s', i)
    }

    #[test]
    fn dual_schema_lookup() {
        let r3 = RelationSchema::parse("R3", "t(i) t(i-1) = t(j) t(j-1)", &fams).unwrap();
        let found = r3.instances_at(Side::Right, t(5), t(2));
        assert_eq!(found.len(), 2, "both orientations of the same relation");
        assert!(found.iter().all(|i| i.lhs == Word::positive([t(5), t(4)])
            && i.rhs == Word::positive([t(2), t(1)])));
        assert!(r3.instances_at(Side::Right, t(3), t(3)).is_empty());
        let left = r3.instances_at(Side::Left, t(4), t(1));
        assert_eq!(left[0].lhs, Word::positive([t(5), t(4)]));
        assert_eq!(left[0].rhs, Word::positive([t(2), t(1)]));
    }

    #[test]
    fn finite_domains_are_inferred_and_restricted() {
        let r1 = RelationSchema::parse("R1", "t(i) s(j) t(i) = s(j) t(i) s(j)", &fams).unwrap();
        assert_eq!(r1.domain('j'), Some(&ParamDomain::Values((1..=4).collect())));
        assert!(r1.domain('i').unwrap().is_integers());
        let r1 = r1.restrict('j', [1, 2, 3]);
        assert!(r1.instances_at(Side::Right, t(0), s(4)).is_empty());
        assert_eq!(r1.instances_at(Side::Right, t(0), s(3)).len(), 1);
    }

    #[test]
    fn instantiate_checks_bindings() {
        let r3 = RelationSchema::parse("R3", "t(i) t(i-1) = t(j) t(j-1)", &fams).unwrap();
        let b: Bindings = [('i', 2), ('j', 1)].into_iter().collect();
        let inst = r3.instantiate(&b).unwrap().unwrap();
        assert_eq!(inst.to_string(), "t(2) t(1) = t(1) t(0)");
        let degenerate: Bindings = [('i', 2), ('j', 2)].into_iter().collect();
        assert_eq!(r3.instantiate(&degenerate).unwrap(), None);
        let partial: Bindings = [('i', 2)].into_iter().collect();
        assert!(r3.instantiate(&partial).is_err());
    }

    #[test]
    fn rejects_unpinned_integer_parameters() {
        let err = RelationSchema::parse("bad", "s1 t(i) = s1 t(i+1)", &fams);
        assert!(err.is_err());
        assert!(RelationSchema::parse("ok", "t(i) s1 = s1 t(i)", &fams).is_ok());
    }

    #[test]
    fn window_enumeration() {
        let r3 = RelationSchema::parse("R3", "t(i) t(i-1) = t(j) t(j-1)", &fams).unwrap();
        let inst = r3.instances_within(-1, 1);
        assert_eq!(inst.len(), 2);
        assert!(inst.iter().all(|i| i.same_relation(&inst[0])));
        assert!(inst[0].same_relation(&RelationInstance {
            lhs: Word::positive([t(1), t(0)]),
            rhs: Word::positive([t(0), t(-1)]),
            origin: inst[0].origin.clone(),
        }));
    }

    #[test]
    fn bindings_round_trip() {
        let b = parse_bindings("i=2,j=-1").unwrap();
        assert_eq!(format_bindings(&b), "i=2,j=-1");
        assert!(parse_bindings("i=2,i=3").is_err());
        assert!(parse_bindings("ij=2").is_err());
    }
}
