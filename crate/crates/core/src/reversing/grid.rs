//! Reversing grids: the planar diagram of a finished reversal.
//!
//! The current word is kept as a path of vertices. A positive letter is a
//! horizontal edge along the path, a negative letter a vertical edge against
//! it. A swap closes a cell by a fresh path spelling the replacement; a
//! deletion closes the corner with an undirected ε arc.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::{ReversalOutcome, ReversalTrace, StepKind};
use crate::presentation::{RelationInstance, Side};
use crate::words::{Generator, Letter};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("no grid for an unfinished reversal ({0})")]
    Unfinished(&'static str),
}

/// A grid point; `step` is the step that created it (0 for the start word)
/// and `slot` its position along the path at that moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridVertex {
    pub id: usize,
    pub step: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "label", rename_all = "lowercase")]
pub enum EdgeKind {
    Horizontal(Generator),
    Vertical(Generator),
    Epsilon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReversingGrid {
    pub side: Side,
    pub vertices: Vec<GridVertex>,
    pub edges: Vec<GridEdge>,
    /// The relation completing each cell, in step order.
    pub cells: Vec<RelationInstance>,
    /// Vertices along the start word and along the final word.
    pub start_path: Vec<usize>,
    pub final_path: Vec<usize>,
}

impl ReversingGrid {
    pub fn labeled_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.kind != EdgeKind::Epsilon).count()
    }

    pub fn epsilon_arcs(&self) -> usize {
        self.edges.len() - self.labeled_edges()
    }

    fn vertex(&mut self, step: usize, slot: usize) -> usize {
        let id = self.vertices.len();
        self.vertices.push(GridVertex { id, step, slot });
        id
    }

    /// Edge for `letter` traversed from `a` to `b`.
    fn letter_edge(&mut self, a: usize, b: usize, letter: Letter) {
        let edge = if letter.is_positive() {
            GridEdge {
                from: a,
                to: b,
                kind: EdgeKind::Horizontal(letter.gen),
            }
        } else {
            GridEdge {
                from: b,
                to: a,
                kind: EdgeKind::Vertical(letter.gen),
            }
        };
        self.edges.push(edge);
    }
}

pub fn build_grid(trace: &ReversalTrace) -> Result<ReversingGrid, GridError> {
    match trace.outcome {
        ReversalOutcome::Terminal { .. } | ReversalOutcome::Empty => {}
        ReversalOutcome::Stuck { .. } => return Err(GridError::Unfinished("stuck")),
        ReversalOutcome::Diverged { .. } => return Err(GridError::Unfinished("diverged")),
    }
    let mut grid = ReversingGrid {
        side: trace.side,
        vertices: Vec::new(),
        edges: Vec::new(),
        cells: Vec::new(),
        start_path: Vec::new(),
        final_path: Vec::new(),
    };
    let mut path: Vec<usize> = (0..=trace.start.len()).map(|slot| grid.vertex(0, slot)).collect();
    for (i, &letter) in trace.start.letters().iter().enumerate() {
        grid.letter_edge(path[i], path[i + 1], letter);
    }
    grid.start_path = path.clone();

    for (n, step) in trace.steps.iter().enumerate() {
        let p = step.position;
        let (a, b) = (path[p], path[p + 2]);
        let replacement = step.replacement(trace.side);
        let mut fresh = vec![a];
        for k in 1..replacement.len() {
            fresh.push(grid.vertex(n + 1, p + k));
        }
        fresh.push(b);
        match &step.kind {
            StepKind::Delete { .. } => {
                // the ε arc glues `a` and `b`; `a` stands for both afterwards
                grid.edges.push(GridEdge {
                    from: a,
                    to: b,
                    kind: EdgeKind::Epsilon,
                });
                fresh.pop();
            }
            StepKind::Swap { relation } => {
                for (k, &letter) in replacement.iter().enumerate() {
                    grid.letter_edge(fresh[k], fresh[k + 1], letter);
                }
                grid.cells.push(relation.clone());
            }
        }
        path.splice(p..p + 3, fresh);
    }
    grid.final_path = path;
    Ok(grid)
}

/// Graphviz text for a grid; ε arcs are dashed and undirected.
pub fn grid_to_dot(grid: &ReversingGrid) -> String {
    let mut out = String::from("digraph reversing {\n  node [shape=point];\n");
    for v in &grid.vertices {
        let _ = writeln!(out, "  v{};", v.id);
    }
    for e in &grid.edges {
        let _ = match e.kind {
            EdgeKind::Horizontal(g) => writeln!(out, "  v{} -> v{} [label=\"{g}\"];", e.from, e.to),
            EdgeKind::Vertical(g) => writeln!(out, "  v{} -> v{} [label=\"{g}\", style=bold];", e.from, e.to),
            EdgeKind::Epsilon => writeln!(out, "  v{} -> v{} [style=dashed, dir=none];", e.from, e.to),
        };
    }
    out.push_str("}\n");
    out
}
