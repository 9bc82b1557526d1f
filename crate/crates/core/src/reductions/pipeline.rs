//! End-to-end solver for MAX-2SAT through a host graph: encode, embed,
//! lift, decompose, build and solve the ε-formulation, extract, round and
//! pull back.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::lift::{lift_instance, pullback_solution};
use super::max2sat::{decode_assignment, encode_max2sat, x_name, y_names, Max2SatInstance};
use super::round::round_solution;
use crate::error::{Error, Result};
use crate::graph::{
    find_minor_model, grid_graph_rect, grid_label, minor_model_to_ops, treewidth_upper, Graph, Heuristic,
    MinorModel, MinorOperation, TreewidthResult, DEFAULT_MINOR_CAP,
};
use crate::lp::{build_ef, extract_assignment, solve_ef, EfMode, DEFAULT_EF_COLUMN_CAP};
use crate::rational::{format_rational, ratio, Rational};

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub eps: Rational,
    /// Explicit branch sets of the encoded intersection graph in the host.
    pub model: Option<MinorModel>,
    pub minor_cap: usize,
    pub column_cap: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            eps: ratio(1, 20),
            model: None,
            minor_cap: DEFAULT_MINOR_CAP,
            column_cap: DEFAULT_EF_COLUMN_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub stage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
    pub sizes: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub stages: Vec<Stage>,
    /// Operations in the order they are applied to the host.
    pub ops: Vec<MinorOperation>,
    /// The same operations in the order lifting replays them.
    pub lift_order: Vec<MinorOperation>,
}

impl Trace {
    pub fn strip_timings(&mut self) {
        for s in &mut self.stages {
            s.millis = None;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub optimum: usize,
    pub assignment: Vec<bool>,
    pub trace: Trace,
}

struct Recorder {
    stages: Vec<Stage>,
    t: Instant,
}

impl Recorder {
    fn push(&mut self, stage: &str, sizes: &[(&str, serde_json::Value)]) {
        let now = Instant::now();
        self.stages.push(Stage {
            stage: stage.to_string(),
            millis: Some((now - self.t).as_secs_f64() * 1e3),
            sizes: sizes.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        });
        self.t = now;
    }
}

/// `(rows, cols)` if `g` is exactly `grid_graph_rect(rows, cols)`.
pub fn grid_dims(g: &Graph) -> Option<(usize, usize)> {
    let mut rows = 0;
    let mut cols = 0;
    for l in g.labels() {
        let rest = l.strip_prefix('r')?;
        let (r, c) = rest.split_once('c')?;
        rows = rows.max(r.parse::<usize>().ok()? + 1);
        cols = cols.max(c.parse::<usize>().ok()? + 1);
    }
    (g.n() > 0 && g.same_labeled(&grid_graph_rect(rows, cols))).then_some((rows, cols))
}

/// Embeds the encoded intersection graph into a grid host using the
/// formula's grid witness: variables sit `s ≥ 3` apart and each clause's
/// two indicators take the straight path between its variables.
pub fn witness_model(f: &Max2SatInstance, host: &Graph, target: &Graph) -> Option<MinorModel> {
    let (rows, cols) = grid_dims(host)?;
    let w = f.witness.as_ref()?;
    if (1..=f.n).any(|j| !w.contains_key(&j)) {
        return None;
    }
    let r0 = w.values().map(|p| p.0).min()?;
    let c0 = w.values().map(|p| p.1).min()?;
    let pos: BTreeMap<usize, (usize, usize)> = w.iter().map(|(&v, &(r, c))| (v, (r - r0, c - c0))).collect();
    let max_r = pos.values().map(|p| p.0).max()?;
    let max_c = pos.values().map(|p| p.1).max()?;
    let fit = |extent: usize, size: usize| if extent == 0 { usize::MAX } else { (size - 1) / extent };
    let s = match fit(max_r, rows).min(fit(max_c, cols)) {
        usize::MAX => 3,
        s => s,
    };
    if s < 3 || max_r * s >= rows || max_c * s >= cols {
        return None;
    }
    let mut used = std::collections::BTreeSet::new();
    if pos.values().any(|p| !used.insert(*p)) {
        return None;
    }
    let mut pairs = std::collections::BTreeSet::new();
    let mut sets: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (&v, &(r, c)) in &pos {
        sets.insert(x_name(v), vec![grid_label(r * s, c * s)]);
    }
    for (i, cl) in f.clauses.iter().enumerate() {
        let (a, b) = (pos[&cl[0].var], pos[&cl[1].var]);
        let (dr, dc) = (b.0 as i64 - a.0 as i64, b.1 as i64 - a.1 as i64);
        if dr.abs() + dc.abs() != 1 || !pairs.insert((a.min(b), a.max(b))) {
            return None;
        }
        let at = |k: usize| {
            let r = (a.0 * s) as i64 + dr * k as i64;
            let c = (a.1 * s) as i64 + dc * k as i64;
            grid_label(r as usize, c as usize)
        };
        let [y1, y2] = y_names(i + 1);
        sets.insert(y1, vec![at(1)]);
        sets.insert(y2, (2..s).map(at).collect());
    }
    MinorModel::from_branch_sets(host, target, sets).ok()
}

/// Branch sets `{v}` when the target is a labeled subgraph of the host.
fn identity_model(host: &Graph, target: &Graph) -> Option<MinorModel> {
    if target.labels().iter().any(|l| host.index_of(l).is_none()) {
        return None;
    }
    let sets = target.labels().iter().map(|l| (l.clone(), vec![l.clone()])).collect();
    MinorModel::from_branch_sets(host, target, sets).ok()
}

/// Host that contains `g`: `extra_vertices` new vertices `h1, h2, ...`, each
/// joined to both ends of a random edge (or to a random vertex when `g` has
/// no edges), plus up to `extra_edges` edges between vertices at distance two.
pub fn random_supergraph(g: &Graph, extra_vertices: usize, extra_edges: usize, rng: &mut impl Rng) -> Graph {
    let mut h = g.clone();
    for k in 1..=extra_vertices {
        let edges: Vec<(usize, usize)> = h.edges().collect();
        let label = format!("h{k}");
        let v = h.add_vertex(label).expect("fresh label");
        if let Some(&(a, b)) = edges.choose(rng) {
            h.add_edge_idx(v, a).unwrap();
            h.add_edge_idx(v, b).unwrap();
        } else if v > 0 {
            let a = rng.gen_range(0..v);
            h.add_edge_idx(v, a).unwrap();
        }
    }
    for _ in 0..extra_edges {
        let mut cands = Vec::new();
        for a in 0..h.n() {
            for &m in h.neighbors(a) {
                for &b in h.neighbors(m) {
                    if a < b && !h.has_edge(a, b) {
                        cands.push((a, b));
                    }
                }
            }
        }
        cands.sort_unstable();
        cands.dedup();
        match cands.choose(rng) {
            Some(&(a, b)) => h.add_edge_idx(a, b).unwrap(),
            None => break,
        }
    }
    h
}

fn best_decomposition(g: &Graph) -> TreewidthResult {
    let a = treewidth_upper(g, Heuristic::MinFill);
    let b = treewidth_upper(g, Heuristic::MinDegree);
    if b.width < a.width {
        b
    } else {
        a
    }
}

pub fn pipeline(f: &Max2SatInstance, host: &Graph, opts: &PipelineOptions) -> Result<PipelineResult> {
    if opts.eps <= Rational::from_integer(0.into()) || opts.eps >= ratio(1, 10) {
        return Err(Error::Precondition(format!(
            "pipeline needs 0 < epsilon < 1/10, got {}",
            format_rational(&opts.eps)
        )));
    }
    let mut rec = Recorder {
        stages: Vec::new(),
        t: Instant::now(),
    };
    let inst = encode_max2sat(f)?;
    let target = inst.intersection_graph();
    rec.push(
        "encode",
        &[
            ("variables", inst.n().into()),
            ("constraints", inst.constraints().len().into()),
            ("clauses", f.clauses.len().into()),
        ],
    );

    let (model, source) = if let Some(m) = &opts.model {
        (m.clone(), "supplied")
    } else if let Some(m) = identity_model(host, &target) {
        (m, "subgraph")
    } else if let Some(m) = witness_model(f, host, &target) {
        (m, "grid-witness")
    } else {
        match find_minor_model(host, &target, opts.minor_cap)? {
            Some(m) => (m, "search"),
            None => {
                return Err(Error::InvalidModel(
                    "the encoded intersection graph is not a minor of the host".into(),
                ))
            }
        }
    };
    let seq = minor_model_to_ops(host, &target, &model)?;
    rec.push(
        "model",
        &[
            ("source", source.into()),
            ("host_vertices", host.n().into()),
            ("host_edges", host.m().into()),
            ("operations", seq.ops.len().into()),
        ],
    );

    let lifted = lift_instance(&inst, host, &seq.ops, Some(&seq.iso))?;
    rec.push(
        "lift",
        &[
            ("variables", lifted.instance.n().into()),
            ("constraints", lifted.instance.constraints().len().into()),
            ("redundant", lifted.redundant.len().into()),
        ],
    );

    let td = best_decomposition(host);
    rec.push(
        "decomposition",
        &[("width", td.width.into()), ("bags", td.decomposition.len().into())],
    );

    let (lp, table) = build_ef(
        &lifted.instance,
        &td.decomposition,
        &EfMode::Eps(opts.eps.clone()),
        opts.column_cap,
    )?;
    rec.push(
        "build_eps_ef",
        &[
            ("columns", table.lambda_columns().into()),
            ("rows", lp.n_rows().into()),
            ("gamma", format_rational(table.gamma.as_ref().unwrap()).into()),
        ],
    );

    let sol = solve_ef(&lp, &table)?;
    let lp_value = sol
        .objective
        .clone()
        .ok_or_else(|| Error::Infeasible(format!("formulation is {}", sol.status)))?;
    rec.push(
        "solve",
        &[("status", sol.status.to_string().into()), ("objective", format_rational(&lp_value).into())],
    );

    let z = extract_assignment(&sol, &table)?;
    let viol = lifted.instance.eps_feasible(&z, &opts.eps)?.max_violation(&lifted.instance);
    rec.push(
        "extract",
        &[
            ("objective", format_rational(&lifted.instance.objective_value(&z)?).into()),
            ("max_violation", format_rational(&viol).into()),
        ],
    );

    let rounded = round_solution(&lifted, &z, &opts.eps)?;
    rec.push(
        "round",
        &[("objective", format_rational(&lifted.instance.objective_value(&rounded)?).into())],
    );

    let back = pullback_solution(&lifted, &rounded)?;
    let assignment = decode_assignment(f, &back)?;
    let optimum = f.satisfied(&assignment);
    let value = inst.objective_value(&back)?;
    if value != Rational::from_integer(optimum.into()) {
        return Err(Error::Invalid(format!(
            "pulled-back objective {} differs from the clause count {optimum}",
            format_rational(&value)
        )));
    }
    rec.push("pullback", &[("objective", optimum.into())]);

    let mut lift_order = seq.ops.clone();
    lift_order.reverse();
    Ok(PipelineResult {
        optimum,
        assignment,
        trace: Trace {
            stages: rec.stages,
            ops: seq.ops,
            lift_order,
        },
    })
}
