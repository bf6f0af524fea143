//! Word reversing and cancellativity certification for positive monoid
//! presentations with ℤ-indexed generator families.

pub mod completeness;
pub mod derivation;
pub mod oracle;
pub mod presentation;
pub mod reversing;
pub mod words;

pub use presentation::{catalog_load, Presentation, Side};
pub use words::{Generator, Letter, Sign, Word};

/// Step budget used when none is given.
pub const DEFAULT_FUEL: usize = 10_000;

pub const TOOL_VERSION: &str = concat!("cubecheck ", env!("CARGO_PKG_VERSION"));
