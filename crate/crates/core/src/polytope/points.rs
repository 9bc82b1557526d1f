use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Finite set of integer points in `Z^dim`, kept in insertion order.
///
/// Most constructions produce 0/1 points; re-encoding and decomposability
/// also accept general integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PointSetJson", into = "PointSetJson")]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<i64>>,
    tag: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PointSetJson {
    dim: usize,
    points: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tag: Option<String>,
}

impl TryFrom<PointSetJson> for PointSet {
    type Error = Error;
    fn try_from(j: PointSetJson) -> Result<Self> {
        let mut s = PointSet::new(j.dim, j.points)?;
        s.tag = j.tag;
        Ok(s)
    }
}

impl From<PointSet> for PointSetJson {
    fn from(s: PointSet) -> Self {
        PointSetJson {
            dim: s.dim,
            points: s.points,
            tag: s.tag,
        }
    }
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Invalid(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if !seen.insert(p) {
                return Err(Error::Invalid(format!("point {i} is a duplicate")));
            }
        }
        Ok(Self { dim, points, tag: None })
    }

    pub fn binary(dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        let s = Self::new(dim, points)?;
        s.require_binary()?;
        Ok(s)
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("point set JSON: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("point sets serialize")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn is_binary(&self) -> bool {
        self.points.iter().flatten().all(|&c| c == 0 || c == 1)
    }

    pub fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::Invalid("point set has coordinates outside {0,1}".into()))
        }
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.iter().any(|q| q == p)
    }

    /// Order-independent comparison.
    pub fn same_set(&self, other: &PointSet) -> bool {
        self.dim == other.dim && self.sorted() == other.sorted()
    }

    pub fn sorted(&self) -> Vec<Vec<i64>> {
        let mut v = self.points.clone();
        v.sort();
        v
    }

    /// Distinct projections onto `coords`, in first-seen order.
    pub fn project(&self, coords: &[usize]) -> PointSet {
        let mut seen = BTreeSet::new();
        let mut pts = Vec::new();
        for p in &self.points {
            let q: Vec<i64> = coords.iter().map(|&c| p[c]).collect();
            if seen.insert(q.clone()) {
                pts.push(q);
            }
        }
        PointSet {
            dim: coords.len(),
            points: pts,
            tag: None,
        }
    }

    /// Compact label such as `101` for 0/1 points, `(2,-1)` otherwise.
    pub fn point_label(p: &[i64]) -> String {
        if p.iter().all(|&c| c == 0 || c == 1) && !p.is_empty() {
            p.iter().map(|c| c.to_string()).collect()
        } else {
            let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }
}

/// `S⁺ = (S × {0}) ∪ {e_{n+1}}`.
pub fn plus_operator(s: &PointSet) -> Result<PointSet> {
    if s.is_empty() {
        return Err(Error::Invalid("plus operator needs a nonempty set".into()));
    }
    let mut pts: Vec<Vec<i64>> = s
        .points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.push(0);
            q
        })
        .collect();
    let mut apex = vec![0; s.dim + 1];
    apex[s.dim] = 1;
    pts.push(apex);
    Ok(PointSet::new(s.dim + 1, pts)?.with_tag("plus"))
}

pub fn cartesian_product(a: &PointSet, b: &PointSet) -> PointSet {
    let mut pts = Vec::with_capacity(a.len() * b.len());
    for p in &a.points {
        for q in &b.points {
            let mut r = p.clone();
            r.extend_from_slice(q);
            pts.push(r);
        }
    }
    PointSet {
        dim: a.dim + b.dim,
        points: pts,
        tag: None,
    }
}

/// `S⁺ × ... × S⁺` with `k` factors.
pub fn cartesian_power(s: &PointSet, k: usize) -> Result<PointSet> {
    if k < 1 {
        return Err(Error::Invalid("cartesian power needs k >= 1".into()));
    }
    let plus = plus_operator(s)?;
    let size = (plus.len() as u128).checked_pow(k as u32);
    if size.map_or(true, |n| n > MAX_POINTS as u128) {
        return Err(Error::CapExceeded {
            what: "cartesian power",
            size: size.map_or(usize::MAX, |n| n.min(usize::MAX as u128) as usize),
            cap: MAX_POINTS,
            hint: "",
        });
    }
    let mut acc = plus.clone();
    for _ in 1..k {
        acc = cartesian_product(&acc, &plus);
    }
    Ok(acc.with_tag("power"))
}

pub const MAX_POINTS: usize = 1 << 20;

pub const DEFAULT_STAB_CAP: usize = 20;

/// Indicator vectors of the stable sets of `g`, coordinates in vertex order.
pub fn stab_vertices(g: &Graph, cap: usize) -> Result<PointSet> {
    let n = g.n();
    if n > cap.min(30) {
        return Err(Error::CapExceeded {
            what: "stable set enumeration",
            size: n,
            cap: cap.min(30),
            hint: "",
        });
    }
    let masks = g.masks();
    let mut pts = Vec::new();
    let mut cur = Vec::new();
    // lexicographic on the vertex order with the empty set first
    fn rec(i: usize, n: usize, chosen: u64, masks: &[u64], cur: &mut Vec<usize>, out: &mut Vec<Vec<i64>>) {
        if i == n {
            let mut p = vec![0; n];
            for &v in cur.iter() {
                p[v] = 1;
            }
            out.push(p);
            return;
        }
        rec(i + 1, n, chosen, masks, cur, out);
        if chosen & masks[i] == 0 {
            cur.push(i);
            rec(i + 1, n, chosen | 1 << i, masks, cur, out);
            cur.pop();
        }
    }
    rec(0, n, 0, &masks, &mut cur, &mut pts);
    Ok(PointSet::new(n, pts)?.with_tag("stab"))
}

/// `G` plus a universal vertex labeled `label`.
pub fn graph_plus(g: &Graph, label: &str) -> Result<Graph> {
    let mut h = g.clone();
    let v = h.add_vertex(label)?;
    for u in 0..v {
        h.add_edge_idx(u, v)?;
    }
    Ok(h)
}

/// First label of the form `v{k}` absent from `g`.
pub fn fresh_label(g: &Graph) -> String {
    (g.n() + 1..)
        .map(|k| format!("v{k}"))
        .find(|l| g.index_of(l).is_none())
        .unwrap()
}
