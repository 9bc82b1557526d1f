use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use serde::Serialize;
use twlab_core::graph::dimacs::parse_dimacs_graph;
use twlab_core::graph::{grid_graph_rect, Graph};
use twlab_core::po::Assignment;
use twlab_core::rational::{format_rational, parse_rational};
use twlab_core::Error;

/// Bad flag combinations that clap cannot express; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn report(e: &anyhow::Error) -> ExitCode {
    if e.downcast_ref::<UsageError>().is_some() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let kind = e
        .chain()
        .find_map(|c| c.downcast_ref::<Error>().map(Error::kind))
        .or_else(|| e.chain().any(|c| c.is::<std::io::Error>()).then_some("io"))
        .unwrap_or("error");
    let msg = format!("{e:#}");
    eprintln!("{}", serde_json::json!({ "error": kind, "message": msg }));
    ExitCode::from(1)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = read_text(path)?;
    parse_dimacs_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

/// `grid:<g>`, `grid:<r>x<c>`, or a DIMACS file path.
pub fn read_host(arg: &str) -> Result<Graph> {
    let Some(dims) = arg.strip_prefix("grid:") else {
        return read_graph(Path::new(arg));
    };
    let parse = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| usage(format!("bad grid size in host `{arg}`")))
    };
    let (r, c) = match dims.split_once('x') {
        Some((r, c)) => (parse(r)?, parse(c)?),
        None => {
            let g = parse(dims)?;
            (g, g)
        }
    };
    Ok(grid_graph_rect(r, c))
}

pub fn parse_eps(s: &str) -> Result<twlab_core::rational::Rational> {
    parse_rational(s).map_err(|e| usage(format!("--eps: {e}")))
}

/// Object mapping variable names to rational strings or JSON numbers.
pub fn read_assignment(path: &Path) -> Result<Assignment> {
    let text = read_text(path)?;
    let raw: BTreeMap<String, serde_json::Value> =
        serde_json::from_str(&text).map_err(Error::from).with_context(|| format!("parsing {}", path.display()))?;
    raw.into_iter()
        .map(|(k, v)| {
            let q = match &v {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(Error::Invalid(format!("value of `{k}` is not a number"))),
            }?;
            Ok((k, q))
        })
        .collect()
}

pub fn assignment_json(x: &Assignment) -> BTreeMap<String, String> {
    x.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect()
}

pub fn json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
