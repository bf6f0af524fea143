//! Built-in presentations, registered by name.
//!
//! Names: `affine-a:classical:<n>`, `affine-a:shi:<n>`, `affine-a:cll:<n>`,
//! `d4:yamada`, `d4:new`, and `e6|e7|e8:yamada|new`.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::{FamilySpec, Presentation, PresentationError, RelationSchema};
use crate::words::FamilyKind;

/// A named presentation family that can be instantiated on demand.
pub trait CatalogEntry: Send + Sync {
    /// Registry key, e.g. `d4:new` or `affine-a:cll`.
    fn key(&self) -> &'static str;

    /// Whether the key takes a trailing `:<n>` rank argument.
    fn takes_rank(&self) -> bool {
        false
    }

    fn summary(&self) -> &'static str;

    fn build(&self, rank: Option<u32>) -> Result<Presentation, PresentationError>;

    fn usage(&self) -> String {
        if self.takes_rank() {
            format!("{}:<n>", self.key())
        } else {
            self.key().to_string()
        }
    }
}

/// Incremental builder: declare families, then add schemas written as templates.
struct Builder {
    name: String,
    families: Vec<FamilySpec>,
    schemas: Vec<RelationSchema>,
}

impl Builder {
    fn new(name: impl Into<String>, families: Vec<FamilySpec>) -> Self {
        Builder {
            name: name.into(),
            families,
            schemas: Vec::new(),
        }
    }

    fn schema(&self, name: &str, text: &str) -> RelationSchema {
        let families = self.families.clone();
        let resolve = move |c: char| -> Option<(FamilyKind, Option<BTreeSet<i64>>)> {
            families.iter().find(|f| f.symbol == c).map(|f| match f.kind {
                FamilyKind::Indexed => (FamilyKind::Indexed, None),
                FamilyKind::Finite => (FamilyKind::Finite, Some(f.indices.clone())),
            })
        };
        RelationSchema::parse(name, text, &resolve)
            .unwrap_or_else(|e| panic!("built-in schema {name}: {e}"))
    }

    fn add(&mut self, name: &str, text: &str) -> &mut Self {
        let s = self.schema(name, text);
        self.schemas.push(s);
        self
    }

    fn add_restricted(&mut self, name: &str, text: &str, restrictions: &[(char, &[i64])]) -> &mut Self {
        let mut s = self.schema(name, text);
        for (param, values) in restrictions {
            s = s.restrict(*param, values.iter().copied());
        }
        self.schemas.push(s);
        self
    }

    /// Braid relation for each edge, commutation for each non-edge, over the
    /// listed generators of one finite family.
    fn coxeter(&mut self, family: char, gens: &[i64], edges: &[(i64, i64)]) -> &mut Self {
        for (k, &a) in gens.iter().enumerate() {
            for &b in &gens[k + 1..] {
                let edge = edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a));
                let (ga, gb) = (atom(family, a), atom(family, b));
                if edge {
                    self.add(&format!("braid-{ga}-{gb}"), &format!("{ga} {gb} {ga} = {gb} {ga} {gb}"));
                } else {
                    self.add(&format!("commute-{ga}-{gb}"), &format!("{ga} {gb} = {gb} {ga}"));
                }
            }
        }
        self
    }

    fn finish(self) -> Result<Presentation, PresentationError> {
        Presentation::new(self.name, self.families, self.schemas)
    }
}

fn atom(family: char, index: i64) -> String {
    if (0..=9).contains(&index) {
        format!("{family}{index}")
    } else {
        format!("{family}({index})")
    }
}

fn rank_at_least(key: &str, rank: Option<u32>, min: u32) -> Result<i64, PresentationError> {
    match rank {
        Some(n) if n >= min => Ok(n as i64),
        _ => Err(PresentationError::UnknownPresentation(format!(
            "{key} needs a rank n >= {min}"
        ))),
    }
}

/// Edges between the finite generators of the elliptic diagrams; the
/// generators `s1 s2 s3` are the ones tied to `t`.
fn elliptic_tail(n: u32) -> &'static [(i64, i64)] {
    match n {
        6 => &[(1, 4), (2, 5), (3, 6)],
        7 => &[(2, 4), (4, 5), (3, 6), (6, 7)],
        8 => &[(2, 4), (3, 5), (5, 6), (6, 7), (7, 8)],
        _ => unreachable!(),
    }
}

struct AffineClassical;

impl CatalogEntry for AffineClassical {
    fn key(&self) -> &'static str {
        "affine-a:classical"
    }
    fn takes_rank(&self) -> bool {
        true
    }
    fn summary(&self) -> &'static str {
        "cyclic braid presentation on r1..rn (type Ã_{n-1})"
    }
    fn build(&self, rank: Option<u32>) -> Result<Presentation, PresentationError> {
        let n = rank_at_least(self.key(), rank, 3)?;
        let gens: Vec<i64> = (1..=n).collect();
        let edges: Vec<(i64, i64)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        let mut b = Builder::new(format!("affine-a:classical:{n}"), vec![FamilySpec::finite('r', 1..=n)]);
        b.coxeter('r', &gens, &edges);
        b.finish()
    }
}

/// The linear r3..rn chain shared by the Shi and dual presentations.
fn r_chain(b: &mut Builder, n: i64) {
    let gens: Vec<i64> = (3..=n).collect();
    let edges: Vec<(i64, i64)> = (3..n).map(|i| (i, i + 1)).collect();
    if gens.len() < 2 {
        return;
    }
    let braid_values: Vec<i64> = (3..n).collect();
    b.add_restricted("(1)", "r(i) r(i+1) r(i) = r(i+1) r(i) r(i+1)", &[('i', &braid_values)]);
    let far: Vec<(i64, i64)> = gens
        .iter()
        .flat_map(|&a| gens.iter().map(move |&c| (a, c)))
        .filter(|&(a, c)| a < c && !edges.contains(&(a, c)))
        .collect();
    for (a, c) in far {
        let (ga, gc) = (atom('r', a), atom('r', c));
        b.add(&format!("(2)-{ga}-{gc}"), &format!("{ga} {gc} = {gc} {ga}"));
    }
}

struct AffineShi;

impl CatalogEntry for AffineShi {
    fn key(&self) -> &'static str {
        "affine-a:shi"
    }
    fn takes_rank(&self) -> bool {
        true
    }
    fn summary(&self) -> &'static str {
        "generators t0 t1 r3..rn with the length-6 triangle relation"
    }
    fn build(&self, rank: Option<u32>) -> Result<Presentation, PresentationError> {
        let n = rank_at_least(self.key(), rank, 3)?;
        let mut b = Builder::new(
            format!("affine-a:shi:{n}"),
            vec![FamilySpec::finite('r', 3..=n), FamilySpec::finite('t', 0..=1)],
        );
        r_chain(&mut b, n);
        b.add("(3)", "r3 t(i) r3 = t(i) r3 t(i)");
        if n >= 4 {
            let far: Vec<i64> = (4..=n).collect();
            b.add_restricted("(4)", "r(j) t(i) = t(i) r(j)", &[('j', &far)]);
        }
        b.add("(5)", "r3 t1 t0 r3 t1 t0 = t1 t0 r3 t1 t0 r3");
        b.finish()
    }
}

struct AffineDual;

impl CatalogEntry for AffineDual {
    fn key(&self) -> &'static str {
        "affine-a:cll"
    }
    fn takes_rank(&self) -> bool {
        true
    }
    fn summary(&self) -> &'static str {
        "generators t(i), i ∈ ℤ, and r3..rn with t(i) t(i-1) = t(j) t(j-1)"
    }
    fn build(&self, rank: Option<u32>) -> Result<Presentation, PresentationError> {
        let n = rank_at_least(self.key(), rank, 3)?;
        let mut b = Builder::new(
            format!("affine-a:cll:{n}"),
            vec![FamilySpec::finite('r', 3..=n), FamilySpec::indexed('t')],
        );
        r_chain(&mut b, n);
        b.add("(3)", "r3 t(i) r3 = t(i) r3 t(i)");
        if n >= 4 {
            let far: Vec<i64> = (4..=n).collect();
            b.add_restricted("(4)", "r(j) t(i) = t(i) r(j)", &[('j', &far)]);
        }
        b.add("(5)", "t(i) t(i-1) = t(j) t(j-1)");
        b.finish()
    }
}

/// Elliptic presentations in the original two-generator form (`t0`, `t1`).
struct EllipticYamada {
    key: &'static str,
    rank: u32,
}

impl CatalogEntry for EllipticYamada {
    fn key(&self) -> &'static str {
        self.key
    }
    fn summary(&self) -> &'static str {
        match self.rank {
            4 => "elliptic D4 with generators t0 t1 s1..s4 (not complemented)",
            _ => "elliptic E_n with generators t0 t1 s1..sn (not complemented)",
        }
    }
    fn build(&self, _rank: Option<u32>) -> Result<Presentation, PresentationError> {
        let n = self.rank as i64;
        let mut b = Builder::new(
            self.key,
            vec![FamilySpec::finite('s', 1..=n), FamilySpec::finite('t', 0..=1)],
        );
        let core: Vec<i64> = if n == 4 { vec![1, 2, 3, 4] } else { vec![1, 2, 3] };
        b.add_restricted("P1", "t(i) s(j) t(i) = s(j) t(i) s(j)", &[('j', &core)]);
        b.add_restricted("P2", "s(i) s(j) = s(j) s(i)", &[('i', &core), ('j', &core)]);
        b.add_restricted("P3", "s(i) t1 t0 s(i) t1 t0 = t1 t0 s(i) t1 t0 s(i)", &[('i', &core)]);
        if n > 4 {
            add_elliptic_tail(&mut b, self.rank);
        }
        b.finish()
    }
}

/// Elliptic presentations over the ℤ-indexed family `t(i)`.
struct EllipticDual {
    key: &'static str,
    rank: u32,
}

impl CatalogEntry for EllipticDual {
    fn key(&self) -> &'static str {
        self.key
    }
    fn summary(&self) -> &'static str {
        match self.rank {
            4 => "elliptic D4 with generators t(i), i ∈ ℤ, and s1..s4",
            _ => "elliptic E_n with generators t(i), i ∈ ℤ, and s1..sn",
        }
    }
    fn build(&self, _rank: Option<u32>) -> Result<Presentation, PresentationError> {
        let n = self.rank as i64;
        let mut b = Builder::new(
            self.key,
            vec![FamilySpec::finite('s', 1..=n), FamilySpec::indexed('t')],
        );
        let core: Vec<i64> = if n == 4 { vec![1, 2, 3, 4] } else { vec![1, 2, 3] };
        b.add_restricted("R1", "t(i) s(j) t(i) = s(j) t(i) s(j)", &[('j', &core)]);
        b.add_restricted("R2", "s(i) s(j) = s(j) s(i)", &[('i', &core), ('j', &core)]);
        b.add("R3", "t(i) t(i-1) = t(j) t(j-1)");
        if n > 4 {
            add_elliptic_tail(&mut b, self.rank);
        }
        b.finish()
    }
}

/// Coxeter relations of the finite tail: braids along the diagram edges,
/// commutation for the remaining pairs not both among `s1 s2 s3`, and the
/// tail generators commuting with every `t`.
fn add_elliptic_tail(b: &mut Builder, rank: u32) {
    let n = rank as i64;
    let edges = elliptic_tail(rank);
    let gens: Vec<i64> = (1..=n).collect();
    for (k, &a) in gens.iter().enumerate() {
        for &c in &gens[k + 1..] {
            if c <= 3 {
                continue;
            }
            let (ga, gc) = (atom('s', a), atom('s', c));
            if edges.contains(&(a, c)) || edges.contains(&(c, a)) {
                b.add(&format!("braid-{ga}-{gc}"), &format!("{ga} {gc} {ga} = {gc} {ga} {gc}"));
            } else {
                b.add(&format!("commute-{ga}-{gc}"), &format!("{ga} {gc} = {gc} {ga}"));
            }
        }
    }
    let tail: Vec<i64> = (4..=n).collect();
    b.add_restricted("tail-t", "s(j) t(i) = t(i) s(j)", &[('j', &tail)]);
}

fn registry() -> &'static [Box<dyn CatalogEntry>] {
    static REGISTRY: OnceLock<Vec<Box<dyn CatalogEntry>>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        vec![
            Box::new(AffineClassical),
            Box::new(AffineShi),
            Box::new(AffineDual),
            Box::new(EllipticYamada { key: "d4:yamada", rank: 4 }),
            Box::new(EllipticDual { key: "d4:new", rank: 4 }),
            Box::new(EllipticYamada { key: "e6:yamada", rank: 6 }),
            Box::new(EllipticDual { key: "e6:new", rank: 6 }),
            Box::new(EllipticYamada { key: "e7:yamada", rank: 7 }),
            Box::new(EllipticDual { key: "e7:new", rank: 7 }),
            Box::new(EllipticYamada { key: "e8:yamada", rank: 8 }),
            Box::new(EllipticDual { key: "e8:new", rank: 8 }),
        ]
    })
}

pub fn catalog_entries() -> impl Iterator<Item = &'static dyn CatalogEntry> {
    registry().iter().map(|b| b.as_ref())
}

/// Builds a catalog presentation by name.
pub fn catalog_load(name: &str) -> Result<Presentation, PresentationError> {
    for entry in catalog_entries() {
        if !entry.takes_rank() && entry.key() == name {
            return entry.build(None);
        }
        if entry.takes_rank() {
            if let Some(rank) = name.strip_prefix(entry.key()).and_then(|r| r.strip_prefix(':')) {
                let n: u32 = rank
                    .parse()
                    .map_err(|_| PresentationError::UnknownPresentation(name.to_string()))?;
                return entry.build(Some(n));
            }
        }
    }
    Err(PresentationError::UnknownPresentation(name.to_string()))
}
