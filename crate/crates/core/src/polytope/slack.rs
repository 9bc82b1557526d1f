//! Slack matrices and the extension-complexity bracket
//! `rectangle cover <= rk₊(S) = xc <= min(facets, grouped rank-one terms)`.

use std::collections::{BTreeSet, HashSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::hull::{convex_hull_facets, HPolytope};
use super::points::PointSet;
use crate::error::{Error, Result};
use crate::rational::{serde_q, Rational};

pub const DEFAULT_COVER_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackMatrix {
    /// Facet labels, e.g. `x1 + x2 <= 1`.
    pub rows: Vec<String>,
    /// Point labels, e.g. `101`.
    pub cols: Vec<String>,
    pub entries: Vec<SlackRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlackRow(#[serde(with = "serde_q::vec")] pub Vec<Rational>);

impl SlackMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let k = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Invalid("ragged slack matrix".into()));
        }
        if rows.iter().flatten().any(|x| x.is_negative()) {
            return Err(Error::Invalid("slack matrix has a negative entry".into()));
        }
        Ok(Self {
            rows: (0..rows.len()).map(|i| format!("r{i}")).collect(),
            cols: (0..k).map(|j| format!("c{j}")).collect(),
            entries: rows.into_iter().map(SlackRow).collect(),
        })
    }

    pub fn n_rows(&self) -> usize {
        self.entries.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i].0[j]
    }

    /// Row-major 0/1 pattern of the positive entries.
    pub fn support(&self) -> Vec<Vec<bool>> {
        self.entries.iter().map(|r| r.0.iter().map(|x| x.is_positive()).collect()).collect()
    }

    pub fn support_size(&self) -> usize {
        self.entries.iter().flat_map(|r| &r.0).filter(|x| x.is_positive()).count()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let m: SlackMatrix = serde_json::from_str(s).map_err(|e| Error::Invalid(format!("slack matrix JSON: {e}")))?;
        if m.rows.len() != m.entries.len() || m.entries.iter().any(|r| r.0.len() != m.cols.len()) {
            return Err(Error::Invalid("slack matrix labels do not match its shape".into()));
        }
        if m.entries.iter().flat_map(|r| &r.0).any(|x| x.is_negative()) {
            return Err(Error::Invalid("slack matrix has a negative entry".into()));
        }
        Ok(m)
    }
}

/// `S_ij = b_i - a_i·x_j` over the facets of `h` and the points of `s`.
pub fn slack_matrix(h: &HPolytope, s: &PointSet) -> Result<SlackMatrix> {
    if h.ambient_dim != s.dim() {
        return Err(Error::Invalid(format!(
            "polytope lives in dimension {}, points in {}",
            h.ambient_dim,
            s.dim()
        )));
    }
    if h.dim == 0 {
        return Err(Error::Precondition("slack matrices need a polytope of dimension >= 1".into()));
    }
    let mut entries = Vec::with_capacity(h.facets.len());
    for (i, f) in h.facets.iter().enumerate() {
        let mut row = Vec::with_capacity(s.len());
        for (j, p) in s.points().iter().enumerate() {
            let v = f.slack(p);
            if v.is_negative() {
                return Err(Error::Invalid(format!("point {j} violates facet {i} ({f})")));
            }
            row.push(v);
        }
        entries.push(SlackRow(row));
    }
    for (j, p) in s.points().iter().enumerate() {
        if let Some(e) = h.equations.iter().find(|e| !e.slack(p).is_zero()) {
            return Err(Error::Invalid(format!("point {j} is off the affine hull ({})", e.render_eq())));
        }
    }
    Ok(SlackMatrix {
        rows: h.facets.iter().map(|f| f.to_string()).collect(),
        cols: s.points().iter().map(|p| PointSet::point_label(p)).collect(),
        entries,
    })
}

/// Support of the nonzero rows and columns as bitmasks over compressed
/// column indices, one mask per nonzero row.
fn compressed_support(m: &SlackMatrix, cap: usize) -> Result<Vec<u64>> {
    let size = m.support_size();
    if size > cap.min(64) {
        return Err(Error::CapExceeded {
            what: "slack support",
            size,
            cap: cap.min(64),
            hint: "",
        });
    }
    let sup = m.support();
    let cols: Vec<usize> = (0..m.n_cols()).filter(|&j| sup.iter().any(|r| r[j])).collect();
    Ok(sup
        .iter()
        .map(|r| cols.iter().enumerate().filter(|(_, &j)| r[j]).fold(0u64, |acc, (k, _)| acc | 1 << k))
        .filter(|&mask| mask != 0)
        .collect())
}

/// Maximal all-positive rectangles as cell masks over the support cells.
fn maximal_rectangles(rows: &[u64]) -> (Vec<u64>, u64) {
    // cell index of (row i, column c): running offset per row
    let mut offsets = Vec::with_capacity(rows.len());
    let mut total = 0u32;
    for r in rows {
        offsets.push(total);
        total += r.count_ones();
    }
    let cell_mask = |i: usize, cols: u64| -> u64 {
        let mut out = 0u64;
        let mut k = offsets[i];
        let mut r = rows[i];
        while r != 0 {
            let c = r.trailing_zeros();
            if cols >> c & 1 == 1 {
                out |= 1 << k;
            }
            k += 1;
            r &= r - 1;
        }
        out
    };
    let mut family: BTreeSet<u64> = rows.iter().copied().collect();
    let mut frontier: Vec<u64> = family.iter().copied().collect();
    while let Some(c) = frontier.pop() {
        for &r in rows {
            let x = c & r;
            if x != 0 && family.insert(x) {
                frontier.push(x);
            }
        }
    }
    let rects = family
        .into_iter()
        .map(|cols| {
            (0..rows.len())
                .filter(|&i| rows[i] & cols == cols)
                .fold(0u64, |acc, i| acc | cell_mask(i, cols))
        })
        .collect();
    let universe = if total == 64 { u64::MAX } else { (1u64 << total) - 1 };
    (rects, universe)
}

fn cover_within(uncovered: u64, k: usize, rects: &[u64], largest: u32, failed: &mut HashSet<(u64, usize)>) -> bool {
    if uncovered == 0 {
        return true;
    }
    if k == 0 || (uncovered.count_ones() as usize).div_ceil(largest as usize) > k || failed.contains(&(uncovered, k)) {
        return false;
    }
    // branch on the uncovered cell with the fewest candidate rectangles
    let mut best: Option<(usize, u32)> = None;
    let mut bits = uncovered;
    while bits != 0 {
        let c = bits.trailing_zeros();
        bits &= bits - 1;
        let cnt = rects.iter().filter(|&&r| r >> c & 1 == 1).count();
        if best.map_or(true, |(b, _)| cnt < b) {
            best = Some((cnt, c));
        }
    }
    let (_, cell) = best.unwrap();
    for &r in rects.iter().filter(|&&r| r >> cell & 1 == 1) {
        if cover_within(uncovered & !r, k - 1, rects, largest, failed) {
            return true;
        }
    }
    failed.insert((uncovered, k));
    false
}

/// Exact rectangle covering number of the positive support.
pub fn rectangle_cover_lb(m: &SlackMatrix, cap: usize) -> Result<usize> {
    let rows = compressed_support(m, cap)?;
    let (rects, universe) = maximal_rectangles(&rows);
    if universe == 0 {
        return Ok(0);
    }
    let largest = rects.iter().map(|r| r.count_ones()).max().unwrap_or(1);
    let mut failed = HashSet::new();
    let k = (1..)
        .find(|&k| cover_within(universe, k, &rects, largest, &mut failed))
        .unwrap();
    Ok(k)
}

fn distinct_rays(vectors: impl Iterator<Item = Vec<Rational>>) -> usize {
    let mut seen = BTreeSet::new();
    for v in vectors {
        if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
            let scaled: Vec<Rational> = v.iter().map(|x| x / &lead).collect();
            seen.insert(scaled);
        }
    }
    seen.len()
}

/// Size of a nonnegative factorization that groups proportional rows (or
/// columns) into one rank-one term each; the smaller of the two.
pub fn nn_rank_ub(m: &SlackMatrix) -> usize {
    let rows = distinct_rays(m.entries.iter().map(|r| r.0.clone()));
    let cols = distinct_rays((0..m.n_cols()).map(|j| m.entries.iter().map(|r| r.0[j].clone()).collect()));
    rows.min(cols)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XcBracket {
    pub lower: usize,
    pub upper: usize,
    pub notes: Vec<String>,
}

impl XcBracket {
    pub fn new(lower: usize, upper: usize, mut notes: Vec<String>) -> Result<Self> {
        if lower > upper {
            return Err(Error::Invalid(format!("bracket lower bound {lower} exceeds upper bound {upper}")));
        }
        notes.push(
            "lower bound: rectangle covering number of the slack support; bounds xc from below but not xc_SDP".into(),
        );
        notes.push("upper bounds hold for xc and therefore also for xc_SDP <= xc".into());
        Ok(Self { lower, upper, notes })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XcReport {
    pub polytope: HPolytope,
    pub slack: SlackMatrix,
    pub bracket: XcBracket,
}

/// Facets, slack matrix and the bracket `[cover, min(facets, grouped, ef)]`,
/// where `ef_size` is the size of any known extended formulation.
pub fn xc_bracket(s: &PointSet, hull_cap: usize, cover_cap: usize, ef_size: Option<usize>) -> Result<XcReport> {
    let polytope = convex_hull_facets(s, hull_cap)?;
    let slack = slack_matrix(&polytope, s)?;
    let lower = rectangle_cover_lb(&slack, cover_cap)?;
    let grouped = nn_rank_ub(&slack);
    let mut upper = polytope.facets.len().min(grouped);
    let mut notes = vec![
        format!("facets: {}", polytope.facets.len()),
        format!("grouped nonnegative factorization: {grouped}"),
    ];
    if let Some(e) = ef_size {
        notes.push(format!("supplied extended formulation: {e}"));
        upper = upper.min(e);
    }
    let bracket = XcBracket::new(lower, upper, notes)?;
    Ok(XcReport { polytope, slack, bracket })
}
