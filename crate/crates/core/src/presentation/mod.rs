//! Positive presentations with finite and ℤ-indexed generator families.

mod catalog;
mod file;
mod schema;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use catalog::{catalog_entries, catalog_load, CatalogEntry};
pub use file::parse_presentation;
pub use schema::{
    format_bindings, parse_bindings, Bindings, IndexExpr, Origin, ParamDomain, RelationInstance,
    RelationSchema, TemplateLetter,
};

use crate::words::{self, Alphabet, FamilyKind, Generator, Letter, Word, WordError};

/// Which end of the words a lookup or a reversal works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
        })
    }
}

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("schema {0}: {1}")]
    Schema(String, String),
    #[error("{0}")]
    Binding(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("unknown presentation `{0}`")]
    UnknownPresentation(String),
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("presentation is not {side}-complemented at ({x}, {y}): {}", .instances.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" / "))]
    Ambiguous {
        side: Side,
        x: Generator,
        y: Generator,
        instances: Vec<RelationInstance>,
    },
    #[error("generator family `{0}` is not declared")]
    UndeclaredFamily(char),
    #[error("presentation `{0}` has an infinite alphabet; instantiate a window first")]
    Unbounded(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub symbol: char,
    pub kind: FamilyKind,
    /// Allowed indices of a finite family; empty for ℤ-indexed families.
    pub indices: BTreeSet<i64>,
}

impl FamilySpec {
    pub fn finite(symbol: char, indices: impl IntoIterator<Item = i64>) -> Self {
        FamilySpec {
            symbol,
            kind: FamilyKind::Finite,
            indices: indices.into_iter().collect(),
        }
    }

    pub fn indexed(symbol: char) -> Self {
        FamilySpec {
            symbol,
            kind: FamilyKind::Indexed,
            indices: BTreeSet::new(),
        }
    }
}

/// Result of the single-letter complement lookup driving one reversal step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Complement {
    /// `x = y`: the pair cancels.
    Equal,
    /// For right lookups `x·first = y·second`; for left lookups `first·x = second·y`.
    Pair {
        first: Word,
        second: Word,
        instance: RelationInstance,
    },
    /// No relation relates the two generators.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub pair: (Generator, Generator),
    pub instances: Vec<RelationInstance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementReport {
    pub side: Side,
    pub conflicts: Vec<Conflict>,
}

impl ComplementReport {
    pub fn is_complemented(&self) -> bool {
        self.conflicts.is_empty()
    }

    pub fn verdict(&self) -> &'static str {
        if self.is_complemented() {
            "complemented"
        } else {
            "conflict"
        }
    }

    pub fn conflict_at(&self, x: Generator, y: Generator) -> Option<&Conflict> {
        self.conflicts.iter().find(|c| c.pair == (x, y))
    }
}

#[derive(Debug, Clone)]
pub struct Presentation {
    name: String,
    families: Vec<FamilySpec>,
    schemas: Vec<RelationSchema>,
    window: Option<i64>,
    homogeneous: bool,
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        families: Vec<FamilySpec>,
        schemas: Vec<RelationSchema>,
    ) -> Result<Self, PresentationError> {
        let mut p = Presentation {
            name: name.into(),
            families,
            schemas,
            window: None,
            homogeneous: false,
        };
        p.validate()?;
        p.homogeneous = p.check_homogeneous();
        Ok(p)
    }

    fn validate(&self) -> Result<(), PresentationError> {
        for schema in &self.schemas {
            for letter in schema.template_letters() {
                let fam = self
                    .family(letter.family)
                    .filter(|f| f.kind == letter.kind)
                    .ok_or(PresentationError::UndeclaredFamily(letter.family))?;
                if fam.kind == FamilyKind::Finite {
                    let values: Vec<i64> = match letter.index {
                        IndexExpr::Const(c) => vec![c],
                        IndexExpr::Param { name, offset } => match schema.domain(name) {
                            Some(ParamDomain::Values(vs)) => vs.iter().map(|v| v + offset).collect(),
                            _ => {
                                return Err(PresentationError::Schema(
                                    schema.name().to_string(),
                                    format!("parameter `{name}` of finite family `{}` needs a finite domain", fam.symbol),
                                ))
                            }
                        },
                    };
                    if let Some(v) = values.iter().find(|v| !fam.indices.contains(v)) {
                        return Err(PresentationError::Schema(
                            schema.name().to_string(),
                            format!("index {v} is outside family `{}`", fam.symbol),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn families(&self) -> &[FamilySpec] {
        &self.families
    }

    pub fn family(&self, symbol: char) -> Option<&FamilySpec> {
        self.families.iter().find(|f| f.symbol == symbol)
    }

    pub fn schemas(&self) -> &[RelationSchema] {
        &self.schemas
    }

    pub fn schema(&self, name: &str) -> Option<&RelationSchema> {
        self.schemas.iter().find(|s| s.name() == name)
    }

    pub fn window(&self) -> Option<i64> {
        self.window
    }

    pub fn homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn has_indexed_family(&self) -> bool {
        self.families.iter().any(|f| f.kind == FamilyKind::Indexed)
    }

    /// Finite alphabet: no ℤ-indexed family, or a window has been instantiated.
    pub fn is_finite(&self) -> bool {
        self.window.is_some() || !self.has_indexed_family()
    }

    /// Relations commute with `t(i) -> t(i+1)` on an unwindowed ℤ-indexed alphabet.
    pub fn is_shift_invariant(&self) -> bool {
        self.window.is_none()
            && self.has_indexed_family()
            && self.schemas.iter().all(RelationSchema::is_shift_invariant)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        words::parse_word(text, self)
    }

    /// Finite generators followed by ℤ-indexed ones with indices in `range`
    /// (clipped to the window if one is set), sorted by (family, index).
    pub fn generators_in(&self, lo: i64, hi: i64) -> Vec<Generator> {
        let (lo, hi) = match self.window {
            Some(n) => (lo.max(-n), hi.min(n)),
            None => (lo, hi),
        };
        let mut gens: Vec<Generator> = Vec::new();
        for fam in &self.families {
            match fam.kind {
                FamilyKind::Finite => gens.extend(fam.indices.iter().map(|&i| Generator::finite(fam.symbol, i))),
                FamilyKind::Indexed => gens.extend((lo..=hi).map(|i| Generator::indexed(fam.symbol, i))),
            }
        }
        gens.sort();
        gens
    }

    /// The whole alphabet of a finite presentation.
    pub fn alphabet(&self) -> Result<Vec<Generator>, PresentationError> {
        match (self.window, self.has_indexed_family()) {
            (Some(n), _) => Ok(self.generators_in(-n, n)),
            (None, false) => Ok(self.generators_in(0, -1)),
            (None, true) => Err(PresentationError::Unbounded(self.name.clone())),
        }
    }

    fn instance_in_alphabet(&self, inst: &RelationInstance) -> bool {
        match self.window {
            None => true,
            Some(n) => inst.generators().all(|g| !g.is_indexed() || g.index().abs() <= n),
        }
    }

    /// All relation instances `x⋯ = y⋯` (right) or `⋯x = ⋯y` (left), oriented
    /// with `x` on the left-hand side, one per distinct relation.
    pub fn instances_for_pair(&self, x: Generator, y: Generator, side: Side) -> Vec<RelationInstance> {
        let mut seen: HashSet<(Word, Word)> = HashSet::new();
        let mut out = Vec::new();
        for schema in &self.schemas {
            for inst in schema.instances_at(side, x, y) {
                if !self.instance_in_alphabet(&inst) {
                    continue;
                }
                if seen.insert((inst.lhs.clone(), inst.rhs.clone())) {
                    out.push(inst);
                }
            }
        }
        out
    }

    pub fn complement(&self, side: Side, x: Generator, y: Generator) -> Result<Complement, PresentationError> {
        if x == y {
            return Ok(Complement::Equal);
        }
        let mut found = self.instances_for_pair(x, y, side);
        match found.len() {
            0 => Ok(Complement::None),
            1 => {
                let instance = found.pop().unwrap();
                let (first, second) = match side {
                    Side::Right => (
                        instance.lhs.slice(1, instance.lhs.len()),
                        instance.rhs.slice(1, instance.rhs.len()),
                    ),
                    Side::Left => (
                        instance.lhs.slice(0, instance.lhs.len() - 1),
                        instance.rhs.slice(0, instance.rhs.len() - 1),
                    ),
                };
                Ok(Complement::Pair {
                    first,
                    second,
                    instance,
                })
            }
            _ => Err(PresentationError::Ambiguous {
                side,
                x,
                y,
                instances: found,
            }),
        }
    }

    /// `x·v' = y·u'`, returned as `Pair { first: v', second: u' }`.
    pub fn right_complement(&self, x: Generator, y: Generator) -> Result<Complement, PresentationError> {
        self.complement(Side::Right, x, y)
    }

    /// `v'·x = u'·y`, returned as `Pair { first: v', second: u' }`.
    pub fn left_complement(&self, x: Generator, y: Generator) -> Result<Complement, PresentationError> {
        self.complement(Side::Left, x, y)
    }

    /// Index range that exhibits every distinct lookup behaviour.
    ///
    /// Instance words are affine in the two looked-up indices with constants
    /// and offsets taken from the schemas, so whether two lookups coincide is
    /// decided by finitely many linear equalities; any index pattern is
    /// realised inside this range.
    pub fn scan_horizon(&self) -> i64 {
        let c = self.schemas.iter().map(|s| s.indexed_constant_bound()).max().unwrap_or(0);
        let o = self.schemas.iter().map(|s| s.offset_bound()).max().unwrap_or(0);
        2 * (c + 2 * o) + 4
    }

    fn scan_generators(&self) -> Vec<Generator> {
        match self.window {
            Some(n) => self.generators_in(-n, n),
            None => {
                let h = self.scan_horizon();
                self.generators_in(-h, h)
            }
        }
    }

    pub fn complement_report(&self, side: Side) -> ComplementReport {
        let gens = self.scan_generators();
        let mut conflicts = Vec::new();
        for &x in &gens {
            for &y in &gens {
                let mut found = self.instances_for_pair(x, y, side);
                let limit = if x == y { 1 } else { 2 };
                if found.len() >= limit {
                    found.truncate(2);
                    conflicts.push(Conflict {
                        pair: (x, y),
                        instances: found,
                    });
                }
            }
        }
        ComplementReport { side, conflicts }
    }

    /// Right and left complementedness reports.
    pub fn check_complemented(&self) -> (ComplementReport, ComplementReport) {
        (self.complement_report(Side::Right), self.complement_report(Side::Left))
    }

    /// Every relation preserves word length: checked per schema, and on the
    /// instances of a small index window.
    pub fn check_homogeneous(&self) -> bool {
        if !self.schemas.iter().all(RelationSchema::is_homogeneous) {
            return false;
        }
        let (lo, hi) = match self.window {
            Some(n) => (-n, n),
            None => (-3, 3),
        };
        self.schemas
            .iter()
            .flat_map(|s| s.instances_within(lo, hi))
            .all(|i| i.lhs.len() == i.rhs.len())
    }

    /// Finite truncation keeping ℤ-indexed generators with indices in `[-n, n]`.
    pub fn instantiate_window(&self, n: i64) -> Presentation {
        assert!(n >= 1, "window must be positive");
        let mut p = self.clone();
        p.window = Some(match self.window {
            Some(old) => old.min(n),
            None => n,
        });
        p.homogeneous = p.check_homogeneous();
        p
    }

    /// Every relation of a finite presentation, one instance per relation.
    pub fn all_instances(&self) -> Result<Vec<RelationInstance>, PresentationError> {
        let (lo, hi) = match (self.window, self.has_indexed_family()) {
            (Some(n), _) => (-n, n),
            (None, false) => (0, 0),
            (None, true) => return Err(PresentationError::Unbounded(self.name.clone())),
        };
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for schema in &self.schemas {
            for inst in schema.instances_within(lo, hi) {
                if seen.insert(inst.unordered_key()) {
                    out.push(inst);
                }
            }
        }
        Ok(out)
    }

    /// `inst` with every ℤ-indexed letter and its bindings moved by `k`.
    pub fn shift_instance(&self, inst: &RelationInstance, k: i64) -> RelationInstance {
        let mut out = inst.shift(k);
        if let Some(schema) = self.schema(&inst.origin.schema) {
            out.origin.bindings = schema.shift_bindings(&inst.origin.bindings, k);
        }
        out
    }

    /// Human-readable summary: families and schemas.
    pub fn describe(&self) -> String {
        let mut out = format!("presentation {}\n", self.name);
        for fam in &self.families {
            match fam.kind {
                FamilyKind::Indexed => out.push_str(&format!("  family {}(i), i ∈ ℤ\n", fam.symbol)),
                FamilyKind::Finite => {
                    let gens: Vec<String> = fam
                        .indices
                        .iter()
                        .map(|&i| Generator::finite(fam.symbol, i).to_string())
                        .collect();
                    out.push_str(&format!("  generators {}\n", gens.join(" ")));
                }
            }
        }
        if let Some(n) = self.window {
            out.push_str(&format!("  window [-{n}, {n}]\n"));
        }
        out.push_str(&format!("  homogeneous: {}\n", self.homogeneous));
        for schema in &self.schemas {
            out.push_str(&format!("  {schema}\n"));
        }
        out
    }
}

impl Alphabet for Presentation {
    fn family_kind(&self, family: char) -> Option<FamilyKind> {
        self.family(family).map(|f| f.kind)
    }

    fn contains(&self, gen: Generator) -> bool {
        match self.family(gen.family()) {
            Some(f) if f.kind != gen.kind() => false,
            Some(f) => match f.kind {
                FamilyKind::Finite => f.indices.contains(&gen.index()),
                FamilyKind::Indexed => self.window.map_or(true, |n| gen.index().abs() <= n),
            },
            None => false,
        }
    }
}

impl Presentation {
    /// Whether every letter of `w` belongs to the alphabet.
    pub fn contains_word(&self, w: &Word) -> bool {
        w.letters().iter().all(|l: &Letter| self.contains(l.gen))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: i64) -> Generator {
        Generator::indexed('t', i)
    }

    fn s(i: i64) -> Generator {
        Generator::finite('s', i)
    }

    fn r(i: i64) -> Generator {
        Generator::finite('r', i)
    }

    fn word(p: &Presentation, text: &str) -> Word {
        p.parse_word(text).unwrap()
    }

    #[test]
    fn new_d4_pair_lookups() {
        let p = catalog_load("d4:new").unwrap();
        let found = p.instances_for_pair(t(5), t(2), Side::Right);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].to_string(), "t(5) t(4) = t(2) t(1)");
        let found = p.instances_for_pair(s(1), s(2), Side::Right);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].to_string(), "s1 s2 = s2 s1");
    }

    #[test]
    fn yamada_d4_has_two_co_leading_relations() {
        let p = catalog_load("d4:yamada").unwrap();
        let t1 = Generator::finite('t', 1);
        let found = p.instances_for_pair(s(1), t1, Side::Right);
        let text: Vec<String> = found.iter().map(|i| i.to_string()).collect();
        assert_eq!(text, ["s1 t1 s1 = t1 s1 t1", "s1 t1 t0 s1 t1 t0 = t1 t0 s1 t1 t0 s1"]);
    }

    #[test]
    fn right_complements() {
        let p = catalog_load("d4:new").unwrap();
        match p.right_complement(t(2), s(3)).unwrap() {
            Complement::Pair { first, second, .. } => {
                assert_eq!(first, word(&p, "s3 t(2)"));
                assert_eq!(second, word(&p, "t(2) s3"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(p.right_complement(s(2), s(2)).unwrap(), Complement::Equal);

        let shi = catalog_load("affine-a:shi:3").unwrap();
        let t0 = Generator::finite('t', 0);
        let t1 = Generator::finite('t', 1);
        assert_eq!(shi.right_complement(t0, t1).unwrap(), Complement::None);
        assert_eq!(shi.instances_for_pair(t0, t1, Side::Right), vec![]);
    }

    #[test]
    fn left_complements() {
        let p = catalog_load("d4:new").unwrap();
        match p.left_complement(t(4), t(1)).unwrap() {
            Complement::Pair { first, second, instance } => {
                assert_eq!(first, word(&p, "t(5)"));
                assert_eq!(second, word(&p, "t(2)"));
                assert_eq!(instance.to_string(), "t(5) t(4) = t(2) t(1)");
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(p.left_complement(t(7), t(7)).unwrap(), Complement::Equal);
        match p.left_complement(s(1), s(2)).unwrap() {
            Complement::Pair { first, second, .. } => {
                assert_eq!(first, word(&p, "s2"));
                assert_eq!(second, word(&p, "s1"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ambiguous_lookup_is_an_error() {
        let p = catalog_load("d4:yamada").unwrap();
        let err = p.right_complement(s(2), Generator::finite('t', 1)).unwrap_err();
        assert!(matches!(err, PresentationError::Ambiguous { .. }));
    }

    #[test]
    fn complementedness_split() {
        for name in ["d4:new", "e6:new", "e7:new", "e8:new"] {
            let (right, left) = catalog_load(name).unwrap().check_complemented();
            assert!(right.is_complemented(), "{name}: {:?}", right.conflicts);
            assert!(left.is_complemented(), "{name}: {:?}", left.conflicts);
        }
        let (right, _) = catalog_load("d4:yamada").unwrap().check_complemented();
        for i in 1..=4 {
            let c = right.conflict_at(s(i), Generator::finite('t', 1)).expect("conflict");
            assert_eq!(c.instances.len(), 2);
            assert_eq!(c.instances[0].origin.schema.as_ref(), "P1");
            assert_eq!(c.instances[1].origin.schema.as_ref(), "P3");
        }
    }

    #[test]
    fn homogeneity() {
        assert!(catalog_load("d4:new").unwrap().check_homogeneous());
        assert!(catalog_load("affine-a:classical:4").unwrap().check_homogeneous());
        let p = parse_presentation("inhomogeneous", "generators: a1 b1 ; families:\na1 = b1 b1\n").unwrap();
        assert!(!p.check_homogeneous());
        assert!(!p.homogeneous());
    }

    #[test]
    fn window_instantiation() {
        let p = catalog_load("d4:new").unwrap().instantiate_window(1);
        let gens: Vec<String> = p.alphabet().unwrap().iter().map(|g| g.to_string()).collect();
        assert_eq!(gens, ["s1", "s2", "s3", "s4", "t(-1)", "t(0)", "t(1)"]);
        let dual: Vec<String> = p
            .all_instances()
            .unwrap()
            .into_iter()
            .filter(|i| i.origin.schema.as_ref() == "R3")
            .map(|i| i.to_string())
            .collect();
        assert_eq!(dual.len(), 1);
        assert!(dual[0] == "t(1) t(0) = t(0) t(-1)" || dual[0] == "t(0) t(-1) = t(1) t(0)");
        assert!(!p.contains(t(2)));
        assert!(p.contains_word(&word(&p, "t(1) s4 t(-1)")));
    }

    #[test]
    fn catalog_shapes() {
        let p = catalog_load("d4:new").unwrap();
        assert_eq!(p.family('s').unwrap().indices.len(), 4);
        assert_eq!(p.family('t').unwrap().kind, FamilyKind::Indexed);
        let names: Vec<&str> = p.schemas().iter().map(|s| s.name()).collect();
        assert_eq!(names, ["R1", "R2", "R3"]);

        let p = catalog_load("e8:new").unwrap();
        assert_eq!(p.family('s').unwrap().indices.len(), 8);
        let braid = |a: i64, b: i64| p.instances_for_pair(s(a), s(b), Side::Right)[0].lhs.len() == 3;
        for (a, b) in [(2, 4), (3, 5), (5, 6), (6, 7), (7, 8)] {
            assert!(braid(a, b), "s{a}-s{b}");
        }
        assert!(!braid(1, 4) && !braid(2, 3) && !braid(4, 5));

        let p = catalog_load("affine-a:cll:4").unwrap();
        assert_eq!(p.family('r').unwrap().indices, [3, 4].into_iter().collect());
        assert!(p.family('t').unwrap().kind == FamilyKind::Indexed);
        let names: Vec<&str> = p.schemas().iter().map(|s| s.name()).collect();
        assert_eq!(names, ["(1)", "(3)", "(4)", "(5)"], "no far-apart r pair when n = 4");

        let p = catalog_load("affine-a:classical:3").unwrap();
        assert_eq!(p.instances_for_pair(r(1), r(3), Side::Right)[0].to_string(), "r1 r3 r1 = r3 r1 r3");
        assert!(catalog_load("affine-a:classical:2").is_err());
        assert!(catalog_load("d5:new").is_err());
    }
}
