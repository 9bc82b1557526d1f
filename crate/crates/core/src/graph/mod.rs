//! Labeled undirected graphs and the algorithms built on them: chordality,
//! tree decompositions, treewidth, grid graphs and graph minors.
//!
//! Vertex labels are opaque strings. Algorithms work on the dense index
//! `0..n` in declaration order; the label table maps back.

mod chordal;
mod decomposition;
pub mod dimacs;
pub mod iso;
pub(crate) mod minor;
mod treewidth;

pub use chordal::{chordal_completion, is_chordal, ChordalCompletion};
pub use decomposition::{verify_decomposition, DecompositionJson, TreeDecomposition, Violation};
pub use minor::{
    apply_operations, find_minor_model, minor_model_to_ops, MinorModel, MinorOperation,
    MinorSequence, Witness, DEFAULT_MINOR_CAP,
};
pub use treewidth::{
    decomposition_from_order, elimination_width, treewidth_exact, treewidth_lower, treewidth_upper,
    Heuristic,
    TreewidthResult, DEFAULT_EXACT_CAP,
};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
    edge_count: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on vertices labeled `1..=n` with no edges.
    pub fn empty(n: usize) -> Self {
        let mut g = Self::new();
        for i in 1..=n {
            g.add_vertex(i.to_string()).unwrap();
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge_idx(u, v).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..n {
            g.add_edge_idx(u - 1, u).unwrap();
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.add_edge_idx(n - 1, 0).unwrap();
        }
        g
    }

    /// Builds a graph from labels and label pairs.
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (u, v) in edges {
            g.add_edge(u.as_ref(), v.as_ref())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<usize> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(Error::Invalid(format!("duplicate vertex `{label}`")));
        }
        let i = self.labels.len();
        self.index.insert(label.clone(), i);
        self.labels.push(label);
        self.adj.push(BTreeSet::new());
        Ok(i)
    }

    /// Adds an edge between two declared vertices. Re-adding an existing
    /// edge is a no-op; self-loops are rejected.
    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<()> {
        let a = self.require(u)?;
        let b = self.require(v)?;
        self.add_edge_idx(a, b)
    }

    pub fn add_edge_idx(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::Invalid(format!(
                "self-loop on `{}`",
                self.labels.get(u).map(String::as_str).unwrap_or("?")
            )));
        }
        if u >= self.n() || v >= self.n() {
            return Err(Error::Invalid(format!("vertex index out of range ({u}, {v})")));
        }
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.edge_count += 1;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// Edges as index pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    /// Edges as sorted label pairs, for label-space comparisons.
    pub fn label_edge_set(&self) -> BTreeSet<(String, String)> {
        self.edges()
            .map(|(u, v)| {
                let (a, b) = (self.labels[u].clone(), self.labels[v].clone());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect()
    }

    /// True when both graphs have the same vertex labels and the same edges
    /// between them, regardless of declaration order.
    pub fn same_labeled(&self, other: &Graph) -> bool {
        let a: BTreeSet<&String> = self.labels.iter().collect();
        let b: BTreeSet<&String> = other.labels.iter().collect();
        a == b && self.label_edge_set() == other.label_edge_set()
    }

    /// Adjacency bitmasks; requires `n <= 64`.
    pub fn masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "bitmask view needs n <= 64");
        self.adj
            .iter()
            .map(|ns| ns.iter().fold(0u64, |m, &v| m | (1u64 << v)))
            .collect()
    }

    /// Subgraph induced by `keep` (indices), preserving their relative order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::new();
        let mut remap = BTreeMap::new();
        for &v in keep {
            remap.insert(v, g.add_vertex(self.labels[v].clone()).unwrap());
        }
        for (u, v) in self.edges() {
            if let (Some(&a), Some(&b)) = (remap.get(&u), remap.get(&v)) {
                g.add_edge_idx(a, b).unwrap();
            }
        }
        g
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_forest(&self) -> bool {
        self.m() + self.components().len() == self.n()
    }

    /// Returns a copy with the vertex relabeled through `f`.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Result<Graph> {
        let mut g = Graph::new();
        for l in &self.labels {
            g.add_vertex(f(l))?;
        }
        for (u, v) in self.edges() {
            g.add_edge_idx(u, v)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.labels.clone(),
            edges: self
                .edges()
                .map(|(u, v)| [self.labels[u].clone(), self.labels[v].clone()])
                .collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Graph> {
        let mut g = Graph::new();
        for v in &j.vertices {
            g.add_vertex(v.clone())?;
        }
        for [u, v] in &j.edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

/// JSON shape of a graph: `{"vertices": [...], "edges": [[u, v], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

/// The `g x g` grid graph. Vertices are labeled `r{row}c{col}` (0-based),
/// declared row-major.
pub fn grid_graph(g: usize) -> Graph {
    grid_graph_rect(g, g)
}

pub fn grid_graph_rect(rows: usize, cols: usize) -> Graph {
    let mut gr = Graph::new();
    for r in 0..rows {
        for c in 0..cols {
            gr.add_vertex(grid_label(r, c)).unwrap();
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                gr.add_edge_idx(i, i + 1).unwrap();
            }
            if r + 1 < rows {
                gr.add_edge_idx(i, i + cols).unwrap();
            }
        }
    }
    gr
}

pub fn grid_label(r: usize, c: usize) -> String {
    format!("r{r}c{c}")
}
