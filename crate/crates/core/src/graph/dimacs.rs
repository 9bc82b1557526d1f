//! DIMACS-style graph text: `p edge <n> <m>`, `e <u> <v>` (1-based), and
//! comment lines starting with `c`.

use super::Graph;
use crate::error::{Error, Result};

/// Parses a DIMACS graph. Vertices are labeled `1..=n`. Duplicate edges are
/// ignored; the declared edge count must match the number of `e` lines.
pub fn parse_dimacs_graph(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    let mut declared_m = 0usize;
    let mut seen_m = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("p") => {
                if graph.is_some() {
                    return Err(Error::parse(line_no, "duplicate problem line"));
                }
                let fmt = it.next();
                if fmt != Some("edge") && fmt != Some("col") {
                    return Err(Error::parse(line_no, "expected `p edge <n> <m>`"));
                }
                let n = parse_count(it.next(), line_no, "vertex count")?;
                declared_m = parse_count(it.next(), line_no, "edge count")?;
                if it.next().is_some() {
                    return Err(Error::parse(line_no, "trailing tokens on problem line"));
                }
                if n > 1_000_000 {
                    return Err(Error::parse(line_no, "vertex count too large"));
                }
                graph = Some(Graph::empty(n));
            }
            Some("e") => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| Error::parse(line_no, "edge before problem line"))?;
                let u = parse_count(it.next(), line_no, "endpoint")?;
                let v = parse_count(it.next(), line_no, "endpoint")?;
                if it.next().is_some() {
                    return Err(Error::parse(line_no, "trailing tokens on edge line"));
                }
                if u == 0 || v == 0 || u > g.n() || v > g.n() {
                    return Err(Error::parse(line_no, format!("endpoint out of range 1..={}", g.n())));
                }
                if u == v {
                    return Err(Error::parse(line_no, format!("self-loop on {u}")));
                }
                g.add_edge_idx(u - 1, v - 1)?;
                seen_m += 1;
            }
            Some(tok) => {
                return Err(Error::parse(line_no, format!("unexpected line type `{tok}`")));
            }
            None => {}
        }
    }
    let g = graph.ok_or_else(|| Error::parse(0, "missing problem line"))?;
    if seen_m != declared_m {
        return Err(Error::parse(
            0,
            format!("header declares {declared_m} edges, found {seen_m}"),
        ));
    }
    Ok(g)
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("malformed {what}")))
}

/// Writes a graph in DIMACS form. Vertices are numbered by declaration order;
/// a comment line per vertex records its label when labels are not `1..=n`.
pub fn write_dimacs_graph(g: &Graph) -> String {
    let mut out = String::new();
    let plain = g.labels().iter().enumerate().all(|(i, l)| *l == (i + 1).to_string());
    if !plain {
        for (i, l) in g.labels().iter().enumerate() {
            out.push_str(&format!("c label {} {}\n", i + 1, l));
        }
    }
    out.push_str(&format!("p edge {} {}\n", g.n(), g.m()));
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let g = parse_dimacs_graph("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g, Graph::complete(3));
        assert_eq!(parse_dimacs_graph(&write_dimacs_graph(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "e 1 2\n",
            "p edge 2 1\ne 1 3\n",
            "p edge 2 1\ne 1 1\n",
            "p edge 2 2\ne 1 2\n",
            "p edge x 1\n",
            "p edge 2 0\nq\n",
            "",
        ] {
            let e = parse_dimacs_graph(bad).unwrap_err();
            assert_eq!(e.kind(), "parse", "{bad:?}");
        }
    }
}
