//! Text format for user presentations.
//!
//! ```text
//! # comment
//! generators: s1 s2 s3 ; families: t
//! s1 s2 = s2 s1
//! schema R3: t(i) t(i-1) = t(j) t(j-1)
//! ```
//!
//! Plain relation lines are named `rel1`, `rel2`, … in order of appearance.

use std::collections::{BTreeMap, BTreeSet};

use super::{FamilySpec, Presentation, PresentationError, RelationSchema};
use crate::words::{split_atom, FamilyKind};

fn syntax(line: usize, msg: impl std::fmt::Display) -> PresentationError {
    PresentationError::Syntax(format!("line {line}: {msg}"))
}

fn parse_header(line_no: usize, line: &str) -> Result<Vec<FamilySpec>, PresentationError> {
    let (gens, fams) = line
        .split_once(';')
        .ok_or_else(|| syntax(line_no, "header must read `generators: ... ; families: ...`"))?;
    let gens = gens
        .trim()
        .strip_prefix("generators:")
        .ok_or_else(|| syntax(line_no, "expected `generators:`"))?;
    let fams = fams
        .trim()
        .strip_prefix("families:")
        .ok_or_else(|| syntax(line_no, "expected `families:`"))?;

    let mut finite: BTreeMap<char, BTreeSet<i64>> = BTreeMap::new();
    for tok in gens.split_whitespace() {
        let (family, index) = split_atom(tok).ok_or_else(|| syntax(line_no, format!("bad generator `{tok}`")))?;
        let index: i64 = index
            .parse()
            .map_err(|_| syntax(line_no, format!("bad generator `{tok}`")))?;
        finite.entry(family).or_default().insert(index);
    }
    let mut families: Vec<FamilySpec> = finite
        .into_iter()
        .map(|(symbol, indices)| FamilySpec::finite(symbol, indices))
        .collect();
    for tok in fams.split_whitespace() {
        let mut chars = tok.chars();
        let symbol = chars
            .next()
            .filter(|c| c.is_ascii_lowercase() && chars.as_str().is_empty())
            .ok_or_else(|| syntax(line_no, format!("bad family `{tok}`")))?;
        if families.iter().any(|f| f.symbol == symbol) {
            return Err(syntax(line_no, format!("family `{symbol}` declared twice")));
        }
        families.push(FamilySpec::indexed(symbol));
    }
    Ok(families)
}

pub fn parse_presentation(name: &str, text: &str) -> Result<Presentation, PresentationError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| PresentationError::Syntax("empty presentation file".into()))?;
    let families = parse_header(header_no, header)?;

    let resolve = |c: char| -> Option<(FamilyKind, Option<BTreeSet<i64>>)> {
        families.iter().find(|f| f.symbol == c).map(|f| match f.kind {
            FamilyKind::Indexed => (FamilyKind::Indexed, None),
            FamilyKind::Finite => (FamilyKind::Finite, Some(f.indices.clone())),
        })
    };

    let mut schemas = Vec::new();
    let mut plain = 0;
    for (line_no, line) in lines {
        let schema = if let Some(rest) = line.strip_prefix("schema ") {
            let (schema_name, body) = rest
                .split_once(':')
                .ok_or_else(|| syntax(line_no, "expected `schema NAME: lhs = rhs`"))?;
            let schema_name = schema_name.trim();
            if schema_name.is_empty() || schema_name.contains(char::is_whitespace) {
                return Err(syntax(line_no, "bad schema name"));
            }
            RelationSchema::parse(schema_name, body, &resolve).map_err(|e| syntax(line_no, e))?
        } else {
            plain += 1;
            let schema = RelationSchema::parse(&format!("rel{plain}"), line, &resolve)
                .map_err(|e| syntax(line_no, e))?;
            if schema.parameters().next().is_some() {
                return Err(syntax(line_no, "parameters are only allowed in `schema` lines"));
            }
            schema
        };
        if schemas.iter().any(|s: &RelationSchema| s.name() == schema.name()) {
            return Err(syntax(line_no, format!("duplicate schema `{}`", schema.name())));
        }
        schemas.push(schema);
    }
    Presentation::new(name, families, schemas)
}
