//! `cubecheck`: catalog browsing, reversing, cube checks, certificates,
//! derivation replay, the brute-force oracle and grid rendering.
//!
//! Exit codes: 0 pass, 1 fail or counterexample, 2 inconclusive (fuel or a
//! stuck reversal), 3 usage error.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cubecheck::completeness::{certify_cancellative, cube_with, CertifyOptions};
use cubecheck::derivation::{verify_script, DerivationError, DerivationScript};
use cubecheck::oracle::{cancellation_scan, equivalence_class_capped, monoid_equal, OracleError, DEFAULT_CLASS_CAP};
use cubecheck::presentation::{catalog_entries, parse_presentation, PresentationError};
use cubecheck::reversing::{build_grid, grid_to_dot, Reverser};
use cubecheck::{catalog_load, Presentation, Side, Word, DEFAULT_FUEL};

use report::{Report, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cubecheck", version, about = "Word reversing and cube-condition certificates")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Step budget for every reversal.
    #[arg(long, default_value_t = DEFAULT_FUEL, global = true)]
    fuel: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the built-in presentations.
    List,
    /// Show the generators and relation schemas of a presentation.
    Show { pres: String },
    /// Reverse a word and print every intermediate word.
    Reverse {
        pres: String,
        word: String,
        #[arg(long)]
        left: bool,
    },
    /// Try to prove u = v by reversing u⁻¹v to ε.
    Quotient { pres: String, u: String, v: String },
    /// Check the cube condition for one triple.
    Cube {
        pres: String,
        u: String,
        v: String,
        w: String,
        #[arg(long)]
        left: bool,
    },
    /// Certify cancellativity up to a generator bound.
    Certify {
        pres: String,
        #[arg(long, default_value_t = 3)]
        t_bound: u32,
    },
    /// Replay a derivation script.
    Derive { script: PathBuf },
    /// Brute-force queries on a finite window.
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Draw the reversing grid of a word as Graphviz DOT.
    Render {
        pres: String,
        word: String,
        #[arg(long)]
        dot: PathBuf,
        #[arg(long)]
        left: bool,
    },
}

#[derive(Debug, Args)]
struct WindowArgs {
    /// Keep indexed generators within [-N, N].
    #[arg(long, default_value_t = 2)]
    window: i64,
}

#[derive(Debug, Subcommand)]
enum OracleQuery {
    /// Every positive word equal to `word`.
    Class {
        pres: String,
        word: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Decide u = v by exploring the class of u.
    Equal {
        pres: String,
        u: String,
        v: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Search short words for cancellation failures.
    Scan {
        pres: String,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text.clone(),
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.json).expect("json values print")),
            };
            let written = match &cli.output {
                Some(path) => fs::write(path, &body).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("warning: {e:#}");
            }
            ExitCode::from(report.status.code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

/// Catalog name first, then a presentation file.
fn load(name: &str) -> Result<Presentation> {
    match catalog_load(name) {
        Ok(p) => Ok(p),
        Err(PresentationError::UnknownPresentation(_)) if Path::new(name).is_file() => {
            let text = fs::read_to_string(name).with_context(|| format!("reading {name}"))?;
            let stem = Path::new(name).file_stem().and_then(|s| s.to_str()).unwrap_or(name);
            Ok(parse_presentation(stem, &text)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn word(p: &Presentation, text: &str) -> Result<Word> {
    p.parse_word(text).with_context(|| format!("parsing `{text}`"))
}

fn side(left: bool) -> Side {
    if left {
        Side::Left
    } else {
        Side::Right
    }
}

fn windowed(p: Presentation, window: &WindowArgs) -> Result<Presentation> {
    if window.window < 0 {
        bail!("--window must be non-negative");
    }
    Ok(if p.has_indexed_family() {
        p.instantiate_window(window.window)
    } else {
        p
    })
}

/// A reversal that meets an ambiguous pair is a verdict on the presentation,
/// not a usage error.
fn computed<T>(r: Result<T, PresentationError>) -> Result<Result<T, Report>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ PresentationError::Ambiguous { .. }) => Ok(Err(Report::new(
            Status::Fail,
            format!("fail: {e}\n"),
            json!({ "verdict": "fail", "error": e.to_string() }),
        ))),
        Err(e) => Err(e.into()),
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let fuel = cli.fuel;
    match &cli.command {
        Command::List => {
            let entries: Vec<_> = catalog_entries().collect();
            let mut text = String::new();
            for e in &entries {
                text.push_str(&format!("{:<24} {}\n", e.usage(), e.summary()));
            }
            let json = json!(entries
                .iter()
                .map(|e| json!({ "name": e.usage(), "summary": e.summary() }))
                .collect::<Vec<_>>());
            Ok(Report::new(Status::Pass, text, json))
        }
        Command::Show { pres } => {
            let p = load(pres)?;
            Ok(report::presentation(&p))
        }
        Command::Reverse { pres, word: w, left } => {
            let p = load(pres)?;
            let start = word(&p, w)?;
            let trace = match computed(Reverser::new(&p).reverse(side(*left), &start, fuel))? {
                Ok(t) => t,
                Err(r) => return Ok(r),
            };
            Ok(report::reversal(&trace))
        }
        Command::Quotient { pres, u, v } => {
            let p = load(pres)?;
            let (u, v) = (word(&p, u)?, word(&p, v)?);
            if !u.is_positive() || !v.is_positive() {
                bail!("quotient takes positive words");
            }
            let trace = match computed(Reverser::new(&p).quotient(&u, &v, fuel))? {
                Ok(t) => t,
                Err(r) => return Ok(r),
            };
            Ok(report::quotient(&u, &v, &trace))
        }
        Command::Cube { pres, u, v, w, left } => {
            let p = load(pres)?;
            let (u, v, w) = (word(&p, u)?, word(&p, v)?, word(&p, w)?);
            if ![&u, &v, &w].iter().all(|x| x.is_positive()) {
                bail!("cube takes positive words");
            }
            let rev = Reverser::new(&p);
            let result = match computed(cube_with(&rev, &u, &v, &w, side(*left), fuel))? {
                Ok(r) => r,
                Err(r) => return Ok(r),
            };
            Ok(report::cube(&result))
        }
        Command::Certify { pres, t_bound } => {
            let p = load(pres)?;
            let cert = certify_cancellative(&p, &CertifyOptions::new(*t_bound, fuel));
            Ok(report::certificate(&cert))
        }
        Command::Derive { script } => derive(script),
        Command::Oracle { query } => oracle(query),
        Command::Render { pres, word: w, dot, left } => {
            let p = load(pres)?;
            let start = word(&p, w)?;
            let trace = match computed(Reverser::new(&p).reverse(side(*left), &start, fuel))? {
                Ok(t) => t,
                Err(r) => return Ok(r),
            };
            let grid = match build_grid(&trace) {
                Ok(g) => g,
                Err(e) => {
                    return Ok(Report::new(
                        Status::Inconclusive,
                        format!("{e}\n"),
                        json!({ "verdict": "inconclusive", "outcome": trace.outcome }),
                    ))
                }
            };
            let written = fs::write(dot, grid_to_dot(&grid));
            if let Err(e) = &written {
                eprintln!("warning: writing {}: {e}", dot.display());
            }
            let text = format!(
                "grid: {} cells, {} ε arcs, {} labeled edges -> {}\n",
                grid.cells.len(),
                grid.epsilon_arcs(),
                grid.labeled_edges(),
                dot.display()
            );
            let json = json!({
                "cells": grid.cells.len(),
                "epsilon_arcs": grid.epsilon_arcs(),
                "labeled_edges": grid.labeled_edges(),
                "dot": dot.display().to_string(),
                "grid": grid,
            });
            Ok(Report::new(Status::Pass, text, json))
        }
    }
}

fn derive(path: &Path) -> Result<Report> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let loader = move |name: &str| match catalog_load(name) {
        Err(PresentationError::UnknownPresentation(_)) if dir.join(name).is_file() => {
            let text = fs::read_to_string(dir.join(name)).map_err(|e| PresentationError::Syntax(e.to_string()))?;
            parse_presentation(name, &text)
        }
        other => other,
    };
    let (script, p) = DerivationScript::parse_with(&text, &loader)?;
    match verify_script(&script, &p) {
        Ok(rep) => Ok(report::derivation(&rep)),
        Err(e @ DerivationError::Step { .. }) => Ok(Report::new(
            Status::Fail,
            format!("fail: {e}\n"),
            json!({ "success": false, "error": e.to_string() }),
        )),
        Err(e) => Err(e.into()),
    }
}

/// A class that outgrows the cap leaves the question open.
fn oracle_open<T>(r: Result<T, OracleError>) -> Result<Result<T, Report>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ OracleError::ClassTooLarge(..)) => Ok(Err(Report::new(
            Status::Inconclusive,
            format!("inconclusive: {e}\n"),
            json!({ "verdict": "inconclusive", "error": e.to_string() }),
        ))),
        Err(e) => Err(e.into()),
    }
}

fn oracle(query: &OracleQuery) -> Result<Report> {
    match query {
        OracleQuery::Class { pres, word: w, window } => {
            let p = windowed(load(pres)?, window)?;
            let w = word(&p, w)?;
            let class = match oracle_open(equivalence_class_capped(&w, &p, DEFAULT_CLASS_CAP))? {
                Ok(c) => c,
                Err(r) => return Ok(r),
            };
            let mut text = format!("{} words equal to {}:\n", class.len(), class.representative);
            for m in &class.members {
                text.push_str(&format!("  {m}\n"));
            }
            Ok(Report::new(Status::Pass, text, json!(class)))
        }
        OracleQuery::Equal { pres, u, v, window } => {
            let p = windowed(load(pres)?, window)?;
            let (u, v) = (word(&p, u)?, word(&p, v)?);
            let equal = match oracle_open(monoid_equal(&u, &v, &p))? {
                Ok(b) => b,
                Err(r) => return Ok(r),
            };
            let status = if equal { Status::Pass } else { Status::Fail };
            let text = format!("{u} {} {v} in {}\n", if equal { "=" } else { "≠" }, p.name());
            Ok(Report::new(
                status,
                text,
                json!({ "presentation": p.name(), "u": u, "v": v, "equal": equal }),
            ))
        }
        OracleQuery::Scan { pres, window, max_len } => {
            let p = windowed(load(pres)?, window)?;
            let scan = match oracle_open(cancellation_scan(&p, *max_len))? {
                Ok(s) => s,
                Err(r) => return Ok(r),
            };
            Ok(report::scan(&scan))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cubecheck::completeness::Verdict;
    use cubecheck::reversing::ReversalOutcome;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["cubecheck", "oracle", "scan", "d4:new"]).unwrap();
        assert_eq!(cli.fuel, DEFAULT_FUEL);
        assert_eq!(cli.format, Format::Text);
        match cli.command {
            Command::Oracle {
                query: OracleQuery::Scan { window, max_len, .. },
            } => assert_eq!((window.window, max_len), (2, 3)),
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from(["cubecheck", "certify", "d4:new"]).unwrap();
        assert!(matches!(cli.command, Command::Certify { t_bound: 3, .. }));
    }

    #[test]
    fn verdict_codes() {
        assert_eq!(Status::from(Verdict::Pass).code(), 0);
        assert_eq!(Status::from(Verdict::Fail).code(), 1);
        assert_eq!(Status::from(Verdict::Inconclusive).code(), 2);
        assert_eq!(Status::from(&ReversalOutcome::Diverged { fuel: 1 }).code(), 2);
    }
}
