use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Default host-size cap for [`find_minor_model`].
pub const DEFAULT_MINOR_CAP: usize = 12;

/// One graph minor operation, referring to vertices by label.
///
/// `EdgeContraction { u, v, w }` merges the adjacent vertices `u` and `v`
/// into a vertex labeled `w` (which may reuse `u` or `v`), adjacent to every
/// former neighbour of either endpoint. The merged vertex takes `u`'s place
/// in the declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum MinorOperation {
    VertexDeletion { v: String },
    EdgeDeletion { u: String, v: String },
    EdgeContraction { u: String, v: String, w: String },
}

impl std::fmt::Display for MinorOperation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MinorOperation::VertexDeletion { v } => write!(f, "delete vertex {v}"),
            MinorOperation::EdgeDeletion { u, v } => write!(f, "delete edge {{{u}, {v}}}"),
            MinorOperation::EdgeContraction { u, v, w } => {
                write!(f, "contract {{{u}, {v}}} -> {w}")
            }
        }
    }
}

/// Mutable label-keyed graph used while replaying operations.
#[derive(Clone, Debug)]
pub(crate) struct WorkGraph {
    order: Vec<String>,
    adj: BTreeMap<String, BTreeSet<String>>,
}

impl WorkGraph {
    pub(crate) fn from_graph(g: &Graph) -> Self {
        let mut adj = BTreeMap::new();
        for (i, l) in g.labels().iter().enumerate() {
            adj.insert(
                l.clone(),
                g.neighbors(i).iter().map(|&j| g.label(j).to_string()).collect(),
            );
        }
        Self {
            order: g.labels().to_vec(),
            adj,
        }
    }

    pub(crate) fn apply(&mut self, op: &MinorOperation) -> Result<()> {
        let missing = |v: &str| Error::InvalidOperation(format!("{op}: no vertex `{v}`"));
        match op {
            MinorOperation::VertexDeletion { v } => {
                let ns = self.adj.remove(v).ok_or_else(|| missing(v))?;
                for u in ns {
                    self.adj.get_mut(&u).unwrap().remove(v);
                }
                self.order.retain(|x| x != v);
            }
            MinorOperation::EdgeDeletion { u, v } => {
                self.require_edge(op, u, v)?;
                self.adj.get_mut(u).unwrap().remove(v);
                self.adj.get_mut(v).unwrap().remove(u);
            }
            MinorOperation::EdgeContraction { u, v, w } => {
                self.require_edge(op, u, v)?;
                if w != u && w != v && self.adj.contains_key(w) {
                    return Err(Error::InvalidOperation(format!(
                        "{op}: label `{w}` already in use"
                    )));
                }
                let mut merged: BTreeSet<String> = self.adj.remove(u).unwrap();
                merged.extend(self.adj.remove(v).unwrap());
                merged.remove(u);
                merged.remove(v);
                for x in &merged {
                    let s = self.adj.get_mut(x).unwrap();
                    s.remove(u);
                    s.remove(v);
                    s.insert(w.clone());
                }
                self.adj.insert(w.clone(), merged);
                self.order.retain(|x| x != v);
                for x in &mut self.order {
                    if x == u {
                        *x = w.clone();
                    }
                }
            }
        }
        Ok(())
    }

    fn require_edge(&self, op: &MinorOperation, u: &str, v: &str) -> Result<()> {
        let ns = self
            .adj
            .get(u)
            .ok_or_else(|| Error::InvalidOperation(format!("{op}: no vertex `{u}`")))?;
        if !self.adj.contains_key(v) {
            return Err(Error::InvalidOperation(format!("{op}: no vertex `{v}`")));
        }
        if !ns.contains(v) {
            return Err(Error::InvalidOperation(format!("{op}: no edge {{{u}, {v}}}")));
        }
        Ok(())
    }

    pub(crate) fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        for l in &self.order {
            g.add_vertex(l.clone()).unwrap();
        }
        for (u, ns) in &self.adj {
            for v in ns {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }
}

/// Replays `ops` on a copy of `host`.
pub fn apply_operations(host: &Graph, ops: &[MinorOperation]) -> Result<Graph> {
    let mut w = WorkGraph::from_graph(host);
    for op in ops {
        w.apply(op)?;
    }
    Ok(w.to_graph())
}

/// A host edge realizing a target edge between two branch sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub target: [String; 2],
    pub host: [String; 2],
}

/// Branch sets (target label to host labels) plus one witnessing host edge
/// per target edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub branch_sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
}

impl MinorModel {
    /// Builds a model from branch sets, choosing the smallest witness edge
    /// (by host index) for every target edge.
    pub fn from_branch_sets(
        host: &Graph,
        target: &Graph,
        branch_sets: BTreeMap<String, Vec<String>>,
    ) -> Result<MinorModel> {
        let owner = owner_map(host, &branch_sets)?;
        let mut witnesses = Vec::new();
        for (a, b) in target.edges() {
            let (ta, tb) = (target.label(a), target.label(b));
            let found = host.edges().find(|&(x, y)| {
                let (ox, oy) = (owner[x].as_deref(), owner[y].as_deref());
                (ox == Some(ta) && oy == Some(tb)) || (ox == Some(tb) && oy == Some(ta))
            });
            let Some((x, y)) = found else {
                return Err(Error::InvalidModel(format!(
                    "no host edge between branch sets of `{ta}` and `{tb}`"
                )));
            };
            let (hx, hy) = if owner[x].as_deref() == Some(ta) { (x, y) } else { (y, x) };
            witnesses.push(Witness {
                target: [ta.to_string(), tb.to_string()],
                host: [host.label(hx).to_string(), host.label(hy).to_string()],
            });
        }
        let m = MinorModel {
            branch_sets,
            witnesses,
        };
        m.validate(host, target)?;
        Ok(m)
    }

    pub fn from_json(s: &str) -> Result<MinorModel> {
        Ok(serde_json::from_str(s)?)
    }

    /// Checks that branch sets are nonempty, connected and disjoint, cover
    /// exactly the target vertices, and that every target edge has a valid
    /// witness.
    pub fn validate(&self, host: &Graph, target: &Graph) -> Result<()> {
        for t in target.labels() {
            if !self.branch_sets.contains_key(t) {
                return Err(Error::InvalidModel(format!("no branch set for `{t}`")));
            }
        }
        for t in self.branch_sets.keys() {
            if target.index_of(t).is_none() {
                return Err(Error::InvalidModel(format!(
                    "branch set for unknown target vertex `{t}`"
                )));
            }
        }
        let owner = owner_map(host, &self.branch_sets)?;
        for (t, set) in &self.branch_sets {
            let idx: Vec<usize> = set.iter().map(|l| host.require(l)).collect::<Result<_>>()?;
            if idx.is_empty() {
                return Err(Error::InvalidModel(format!("branch set of `{t}` is empty")));
            }
            let sub = host.induced(&idx);
            if sub.components().len() != 1 {
                return Err(Error::InvalidModel(format!(
                    "branch set of `{t}` is not connected"
                )));
            }
        }
        let mut witnessed = BTreeSet::new();
        for w in &self.witnesses {
            let [ta, tb] = &w.target;
            let (a, b) = (target.require(ta)?, target.require(tb)?);
            if !target.has_edge(a, b) {
                return Err(Error::InvalidModel(format!(
                    "witness for non-edge {{{ta}, {tb}}}"
                )));
            }
            let [hx, hy] = &w.host;
            let (x, y) = (host.require(hx)?, host.require(hy)?);
            if !host.has_edge(x, y) {
                return Err(Error::InvalidModel(format!(
                    "witness {{{hx}, {hy}}} is not a host edge"
                )));
            }
            let ok = (owner[x].as_deref() == Some(ta) && owner[y].as_deref() == Some(tb))
                || (owner[x].as_deref() == Some(tb) && owner[y].as_deref() == Some(ta));
            if !ok {
                return Err(Error::InvalidModel(format!(
                    "witness {{{hx}, {hy}}} does not join the branch sets of `{ta}` and `{tb}`"
                )));
            }
            witnessed.insert((a.min(b), a.max(b)));
        }
        for (a, b) in target.edges() {
            if !witnessed.contains(&(a, b)) {
                return Err(Error::InvalidModel(format!(
                    "target edge {{{}, {}}} has no witness",
                    target.label(a),
                    target.label(b)
                )));
            }
        }
        Ok(())
    }
}

/// For each host vertex, the target vertex whose branch set contains it.
fn owner_map(host: &Graph, sets: &BTreeMap<String, Vec<String>>) -> Result<Vec<Option<String>>> {
    let mut owner: Vec<Option<String>> = vec![None; host.n()];
    for (t, set) in sets {
        for l in set {
            let i = host.require(l)?;
            if let Some(prev) = &owner[i] {
                return Err(Error::InvalidModel(format!(
                    "host vertex `{l}` is in the branch sets of both `{prev}` and `{t}`"
                )));
            }
            owner[i] = Some(t.clone());
        }
    }
    Ok(owner)
}

/// Exhaustive search for a minor model of `target` in `host`.
///
/// Branch sets are connected host subsets; target vertices are placed in
/// order of decreasing degree and candidate sets are tried smallest first.
/// The total branch-set size is deepened iteratively, so the first model
/// found uses the fewest host vertices. `Ok(None)` means no model exists.
pub fn find_minor_model(host: &Graph, target: &Graph, cap: usize) -> Result<Option<MinorModel>> {
    let n = host.n();
    if n > cap || n > 24 {
        return Err(Error::CapExceeded {
            what: "minor search host",
            size: n,
            cap: cap.min(24),
            hint: "; supply a minor model file with --model",
        });
    }
    let t = target.n();
    if t > n || target.m() > host.m() {
        return Ok(None);
    }
    if t == 0 {
        return Ok(Some(MinorModel {
            branch_sets: BTreeMap::new(),
            witnesses: Vec::new(),
        }));
    }
    let masks = host.masks();
    let mut subsets: Vec<(u64, u64)> = Vec::new();
    for s in 1u64..(1u64 << n) {
        if connected(s, &masks) {
            let mut nb = 0u64;
            let mut r = s;
            while r != 0 {
                let v = r.trailing_zeros() as usize;
                r &= r - 1;
                nb |= masks[v];
            }
            subsets.push((s, nb & !s));
        }
    }
    subsets.sort_by_cached_key(|&(s, _)| {
        let members: Vec<u32> = (0..n as u32).filter(|&i| s >> i & 1 == 1).collect();
        (members.len(), members)
    });

    let mut order: Vec<usize> = (0..t).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(target.degree(v)), v));
    let tmasks = target.masks();
    let mut search = MinorSearch {
        subsets: &subsets,
        order: &order,
        tmasks: &tmasks,
        host_deg: masks.iter().map(|m| m.count_ones() as usize).collect(),
        target_deg: (0..t).map(|v| target.degree(v)).collect(),
        assigned: vec![None; t],
    };
    for budget in t..=n {
        if search.place(0, 0, budget) {
            let mut branch_sets = BTreeMap::new();
            for v in 0..t {
                let (s, _) = subsets[search.assigned[v].unwrap()];
                let labels = (0..n)
                    .filter(|&i| s >> i & 1 == 1)
                    .map(|i| host.label(i).to_string())
                    .collect();
                branch_sets.insert(target.label(v).to_string(), labels);
            }
            return MinorModel::from_branch_sets(host, target, branch_sets).map(Some);
        }
    }
    Ok(None)
}

fn connected(s: u64, masks: &[u64]) -> bool {
    let start = s & s.wrapping_neg();
    let mut reach = start;
    let mut frontier = start;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = masks[v] & s & !reach;
        reach |= new;
        frontier |= new;
    }
    reach == s
}

struct MinorSearch<'a> {
    subsets: &'a [(u64, u64)],
    order: &'a [usize],
    tmasks: &'a [u64],
    host_deg: Vec<usize>,
    target_deg: Vec<usize>,
    assigned: Vec<Option<usize>>,
}

impl MinorSearch<'_> {
    fn place(&mut self, depth: usize, used: u64, budget: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let left = self.order.len() - depth;
        let spent = used.count_ones() as usize;
        if spent + left > budget {
            return false;
        }
        let v = self.order[depth];
        let max_size = budget - spent - (left - 1);
        for (k, &(s, nb)) in self.subsets.iter().enumerate() {
            let size = s.count_ones() as usize;
            if size > max_size {
                break;
            }
            if s & used != 0 {
                continue;
            }
            if size == 1 && self.host_deg[s.trailing_zeros() as usize] < self.target_deg[v] {
                continue;
            }
            let mut ok = true;
            let mut r = self.tmasks[v];
            while r != 0 {
                let u = r.trailing_zeros() as usize;
                r &= r - 1;
                if let Some(j) = self.assigned[u] {
                    if nb & self.subsets[j].0 == 0 {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            self.assigned[v] = Some(k);
            if self.place(depth + 1, used | s, budget) {
                return true;
            }
            self.assigned[v] = None;
        }
        false
    }
}

/// Operations turning the host into the target, plus the resulting graph and
/// the map from its labels to target labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorSequence {
    pub ops: Vec<MinorOperation>,
    #[serde(skip)]
    pub result: Graph,
    /// Label in the resulting graph to target label.
    pub iso: BTreeMap<String, String>,
}

/// Converts a minor model into explicit operations: delete host vertices in
/// no branch set, contract each branch set onto its first vertex along a BFS
/// tree, then delete edges between branch sets that the target lacks.
pub fn minor_model_to_ops(host: &Graph, target: &Graph, model: &MinorModel) -> Result<MinorSequence> {
    model.validate(host, target)?;
    let owner = owner_map(host, &model.branch_sets)?;
    let mut work = WorkGraph::from_graph(host);
    let mut ops = Vec::new();
    let mut push = |work: &mut WorkGraph, op: MinorOperation| -> Result<()> {
        work.apply(&op)?;
        ops.push(op);
        Ok(())
    };
    for v in 0..host.n() {
        if owner[v].is_none() {
            push(&mut work, MinorOperation::VertexDeletion {
                v: host.label(v).to_string(),
            })?;
        }
    }
    let mut iso = BTreeMap::new();
    for t in target.labels() {
        let mut idx: Vec<usize> = model.branch_sets[t]
            .iter()
            .map(|l| host.require(l))
            .collect::<Result<_>>()?;
        idx.sort_unstable();
        let root = idx[0];
        let inside: BTreeSet<usize> = idx.iter().copied().collect();
        let mut seen = BTreeSet::from([root]);
        let mut queue = vec![root];
        let mut i = 0;
        while i < queue.len() {
            let u = queue[i];
            i += 1;
            for &x in host.neighbors(u) {
                if inside.contains(&x) && seen.insert(x) {
                    queue.push(x);
                }
            }
        }
        let rl = host.label(root).to_string();
        for &x in &queue[1..] {
            push(&mut work, MinorOperation::EdgeContraction {
                u: rl.clone(),
                v: host.label(x).to_string(),
                w: rl.clone(),
            })?;
        }
        iso.insert(rl, t.clone());
    }
    let mut extra = Vec::new();
    for (u, ns) in &work.adj {
        for v in ns {
            if u < v {
                let (a, b) = (target.require(&iso[u])?, target.require(&iso[v])?);
                if !target.has_edge(a, b) {
                    extra.push((u.clone(), v.clone()));
                }
            }
        }
    }
    for (u, v) in extra {
        push(&mut work, MinorOperation::EdgeDeletion { u, v })?;
    }
    let result = work.to_graph();
    let mapped = result.relabeled(|l| iso[l].clone())?;
    if !mapped.same_labeled(target) {
        return Err(Error::InvalidModel(
            "replayed operations do not reproduce the target".into(),
        ));
    }
    Ok(MinorSequence { ops, result, iso })
}
