use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// A tree decomposition over the dense vertex indices of some graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Each bag is a sorted list of vertex indices.
    pub bags: Vec<Vec<usize>>,
    /// Tree edges between bag indices.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownVertex { bag: usize, vertex: usize },
    VertexNotCovered { vertex: String },
    EdgeNotCovered { u: String, v: String },
    NotConnected { vertex: String },
    NotATree { reason: String },
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        Self { bags, edges }
    }

    /// Largest bag size minus one; zero for decompositions of the empty graph.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// BFS order from bag 0 together with each bag's parent.
    pub fn rooted(&self) -> (Vec<usize>, Vec<Option<usize>>) {
        let adj = self.adjacency();
        let mut parent = vec![None; self.bags.len()];
        let mut seen = vec![false; self.bags.len()];
        let mut order = Vec::with_capacity(self.bags.len());
        for root in 0..self.bags.len() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            order.push(root);
            let mut i = order.len() - 1;
            while i < order.len() {
                let u = order[i];
                i += 1;
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        parent[v] = Some(u);
                        order.push(v);
                    }
                }
            }
        }
        (order, parent)
    }

    /// Merges every bag that is contained in a neighbouring bag into that
    /// neighbour. Validity and width are preserved.
    pub fn compact(&self) -> TreeDecomposition {
        let mut bags: Vec<Option<BTreeSet<usize>>> = self
            .bags
            .iter()
            .map(|b| Some(b.iter().copied().collect()))
            .collect();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); bags.len()];
        for &(a, b) in &self.edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        loop {
            let mut merged = false;
            'outer: for a in 0..bags.len() {
                let Some(ba) = &bags[a] else { continue };
                for &b in &adj[a] {
                    let bb = bags[b].as_ref().unwrap();
                    if ba.is_subset(bb) {
                        // fold a into b
                        let ns: Vec<usize> = adj[a].iter().copied().filter(|&x| x != b).collect();
                        for x in ns {
                            adj[x].remove(&a);
                            adj[x].insert(b);
                            adj[b].insert(x);
                        }
                        adj[b].remove(&a);
                        adj[a].clear();
                        bags[a] = None;
                        merged = true;
                        break 'outer;
                    }
                }
            }
            if !merged {
                break;
            }
        }
        let mut remap = BTreeMap::new();
        let mut out_bags = Vec::new();
        for (i, b) in bags.iter().enumerate() {
            if let Some(b) = b {
                remap.insert(i, out_bags.len());
                out_bags.push(b.iter().copied().collect());
            }
        }
        let mut out_edges = BTreeSet::new();
        for (a, ns) in adj.iter().enumerate() {
            for &b in ns {
                if let (Some(&x), Some(&y)) = (remap.get(&a), remap.get(&b)) {
                    if x < y {
                        out_edges.insert((x, y));
                    }
                }
            }
        }
        if out_bags.is_empty() {
            out_bags.push(Vec::new());
        }
        TreeDecomposition::new(out_bags, out_edges.into_iter().collect())
    }

    pub fn to_json(&self, g: &Graph) -> DecompositionJson {
        DecompositionJson {
            width: self.width(),
            bags: self
                .bags
                .iter()
                .map(|b| b.iter().map(|&v| g.label(v).to_string()).collect())
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(j: &DecompositionJson, g: &Graph) -> Result<TreeDecomposition> {
        let bags = j
            .bags
            .iter()
            .map(|b| b.iter().map(|l| g.require(l)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        for &[a, b] in &j.edges {
            if a >= bags.len() || b >= bags.len() {
                return Err(Error::InvalidDecomposition(format!(
                    "tree edge ({a}, {b}) references a missing bag"
                )));
            }
        }
        Ok(TreeDecomposition::new(
            bags,
            j.edges.iter().map(|&[a, b]| (a, b)).collect(),
        ))
    }
}

/// Label-based JSON form of a decomposition.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DecompositionJson {
    #[serde(default)]
    pub width: usize,
    pub bags: Vec<Vec<String>>,
    pub edges: Vec<[usize; 2]>,
}

/// Checks vertex coverage, edge coverage, running intersection and that the
/// bag edges form a tree. Returns every violation found.
pub fn verify_decomposition(g: &Graph, t: &TreeDecomposition) -> Vec<Violation> {
    let mut out = Vec::new();
    let nb = t.bags.len();
    let n = g.n();

    // tree shape
    if nb == 0 {
        if n > 0 {
            out.push(Violation::NotATree {
                reason: "no bags".into(),
            });
        }
    } else {
        let mut tree_ok = true;
        if t.edges.len() != nb - 1 {
            tree_ok = false;
            out.push(Violation::NotATree {
                reason: format!("{} edges for {} bags", t.edges.len(), nb),
            });
        }
        if t.edges.iter().any(|&(a, b)| a >= nb || b >= nb || a == b) {
            tree_ok = false;
            out.push(Violation::NotATree {
                reason: "edge references a missing bag or is a loop".into(),
            });
        }
        if tree_ok {
            let (order, _) = t.rooted();
            let comps = order.len();
            let roots = {
                let (_, parent) = t.rooted();
                parent.iter().filter(|p| p.is_none()).count()
            };
            if comps != nb || roots != 1 {
                out.push(Violation::NotATree {
                    reason: "bag graph is not connected".into(),
                });
            }
        }
    }

    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (bi, bag) in t.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                out.push(Violation::UnknownVertex { bag: bi, vertex: v });
            } else {
                holders[v].push(bi);
            }
        }
    }
    for v in 0..n {
        if holders[v].is_empty() {
            out.push(Violation::VertexNotCovered {
                vertex: g.label(v).to_string(),
            });
        }
    }
    for (u, v) in g.edges() {
        let covered = holders[u]
            .iter()
            .any(|&b| t.bags[b].binary_search(&v).is_ok());
        if !covered {
            out.push(Violation::EdgeNotCovered {
                u: g.label(u).to_string(),
                v: g.label(v).to_string(),
            });
        }
    }
    // running intersection: bags holding v induce a connected subtree
    let adj = t.adjacency();
    for v in 0..n {
        let hs = &holders[v];
        if hs.len() <= 1 {
            continue;
        }
        let set: BTreeSet<usize> = hs.iter().copied().collect();
        let mut seen = BTreeSet::from([hs[0]]);
        let mut stack = vec![hs[0]];
        while let Some(b) = stack.pop() {
            for &c in adj.get(b).into_iter().flatten() {
                if set.contains(&c) && seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        if seen.len() != set.len() {
            out.push(Violation::NotConnected {
                vertex: g.label(v).to_string(),
            });
        }
    }
    out
}
