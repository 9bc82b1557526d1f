//! Lifting an instance along minor operations so that its intersection graph
//! becomes a prescribed host graph, and pulling solutions back.
//!
//! Operations `ops` turn the host `H = G_0` into `G_k = Γ[I]`. Lifting walks
//! them backwards; at step `i` the instance has intersection graph `G_i` and
//! is rewritten to have `G_{i-1}`:
//!
//! * vertex deletion of `v`: new variable `x_v ∈ [0, 1]` without objective
//!   weight, and a row `x_v + x_t ≥ 0` for every neighbour `t` of `v`;
//! * edge deletion of `{u, v}`: the row `x_u + x_v ≥ 0`;
//! * contraction of `{u, v}` into `w`: `z_w` is split into `z_u = z_v`. Each
//!   two-variable row `(w, t)` is copied to `u` if `t` neighbours `u` and to
//!   `v` if `t` neighbours `v` (the partner itself excluded), one-variable
//!   rows go to both halves, objective weight goes to `u`, and a continuous
//!   `z_w` gets `z² − z = 0` on both halves.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::minor::WorkGraph;
use crate::graph::{Graph, GraphJson, MinorOperation};
use crate::po::{
    integrality, Assignment, Constraint, Domain, InstanceJson, Objective, POInstance, Polynomial, Relation, Variable,
};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedInstance {
    pub instance: POInstance,
    pub host: Graph,
    pub ops: Vec<MinorOperation>,
    /// Lifted variable to the original variable it copies; variables added
    /// for deleted vertices are absent.
    pub back_map: BTreeMap<String, String>,
    /// Labels of the graph the operations produce, mapped to the original
    /// variable names.
    pub relabel: BTreeMap<String, String>,
    /// Indices of the rows added only to realize host edges.
    pub redundant: Vec<usize>,
    pub original: POInstance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedJson {
    pub instance: InstanceJson,
    pub host: GraphJson,
    pub ops: Vec<MinorOperation>,
    pub back_map: BTreeMap<String, String>,
    pub relabel: BTreeMap<String, String>,
    pub redundant: Vec<usize>,
    pub original: InstanceJson,
}

impl LiftedInstance {
    pub fn to_json(&self) -> LiftedJson {
        LiftedJson {
            instance: self.instance.to_json(),
            host: self.host.to_json(),
            ops: self.ops.clone(),
            back_map: self.back_map.clone(),
            relabel: self.relabel.clone(),
            redundant: self.redundant.clone(),
            original: self.original.to_json(),
        }
    }

    /// Rebuilds by lifting again, so a tampered file cannot produce an
    /// inconsistent object.
    pub fn from_json(j: LiftedJson) -> Result<LiftedInstance> {
        let original = POInstance::from_json(j.original)?;
        let host = Graph::from_json(&j.host)?;
        let lifted = lift_instance(&original, &host, &j.ops, Some(&j.relabel))?;
        if lifted.instance.to_json() != j.instance || lifted.back_map != j.back_map {
            return Err(Error::Invalid("stored lifted instance does not match its operations".into()));
        }
        Ok(lifted)
    }

    /// Two-variable inequality rows that are neither redundant nor touch an
    /// integral variable (binary, or continuous with `z² − z = 0`).
    pub fn unprotected_rows(&self) -> Vec<usize> {
        let integral = integral_vars(&self.instance);
        let red: BTreeSet<usize> = self.redundant.iter().copied().collect();
        self.instance
            .constraints()
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                let vs = c.poly.variables();
                c.relation == Relation::Ge0 && vs.len() == 2 && !red.contains(i) && !vs.iter().any(|v| integral.contains(v))
            })
            .map(|(i, _)| i)
            .collect()
    }
}

fn integral_vars(inst: &POInstance) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = inst
        .vars()
        .iter()
        .filter(|v| v.domain == Domain::Binary)
        .map(|v| v.name.clone())
        .collect();
    for c in inst.constraints() {
        if c.relation == Relation::Eq0 {
            if let Some(v) = integrality_var(&c.poly) {
                out.insert(v);
            }
        }
    }
    out
}

/// `Some(z)` if `p` is a nonzero multiple of `z² − z`.
fn integrality_var(p: &Polynomial) -> Option<String> {
    let vs = p.variables();
    if vs.len() != 1 || p.terms().len() != 2 {
        return None;
    }
    let v = vs.into_iter().next().unwrap();
    let base = integrality(&v);
    let k = p.linear_coeff(&v) / base.linear_coeff(&v);
    (base.scale(&k) == *p).then_some(v)
}

fn replay(host: &Graph, ops: &[MinorOperation]) -> Result<Vec<Graph>> {
    let mut w = WorkGraph::from_graph(host);
    let mut out = vec![host.clone()];
    for op in ops {
        w.apply(op)?;
        out.push(w.to_graph());
    }
    Ok(out)
}

fn check_structure(inst: &POInstance) -> Result<()> {
    for (i, c) in inst.constraints().iter().enumerate() {
        let k = c.poly.variables().len();
        if k > 2 {
            return Err(Error::Precondition(format!("constraint {i} involves {k} variables")));
        }
        if k == 2 && !c.poly.is_linear() {
            return Err(Error::Precondition(format!("two-variable constraint {i} is not linear")));
        }
    }
    Ok(())
}

struct Work {
    domain: BTreeMap<String, Domain>,
    rows: Vec<(Constraint, bool)>,
    objective: BTreeMap<String, Rational>,
    back: BTreeMap<String, String>,
}

fn redundant_row(a: &str, b: &str) -> (Constraint, bool) {
    (Constraint::ge0(&Polynomial::var(a) + &Polynomial::var(b)), true)
}

/// Lifts `inst` onto `host`. `iso` maps labels of the graph that `ops`
/// produce to variable names of `inst`; without it the names must coincide.
pub fn lift_instance(
    inst: &POInstance,
    host: &Graph,
    ops: &[MinorOperation],
    iso: Option<&BTreeMap<String, String>>,
) -> Result<LiftedInstance> {
    check_structure(inst)?;
    let graphs = replay(host, ops)?;
    let last = graphs.last().unwrap();

    // names of inst in terms of the labels of the last graph
    let mut to_label: BTreeMap<String, String> = BTreeMap::new();
    for l in last.labels() {
        let name = match iso {
            Some(m) => m
                .get(l)
                .cloned()
                .ok_or_else(|| Error::Precondition(format!("relabeling misses `{l}`")))?,
            None => l.clone(),
        };
        if inst.var_index(&name).is_none() {
            return Err(Error::Precondition(format!("`{name}` is not a variable of the instance")));
        }
        if to_label.insert(name.clone(), l.clone()).is_some() {
            return Err(Error::Precondition(format!("relabeling maps twice onto `{name}`")));
        }
    }
    if to_label.len() != inst.n() {
        return Err(Error::Precondition(format!(
            "operations leave {} vertices for {} variables",
            to_label.len(),
            inst.n()
        )));
    }
    let rn = |v: &str| to_label[v].clone();
    let gamma = inst.intersection_graph().relabeled(rn)?;
    if !gamma.same_labeled(last) {
        return Err(Error::Precondition(
            "operations do not reproduce the intersection graph".into(),
        ));
    }

    let mut w = Work {
        domain: inst.vars().iter().map(|v| (rn(&v.name), v.domain)).collect(),
        rows: inst
            .constraints()
            .iter()
            .map(|c| {
                (
                    Constraint {
                        poly: c.poly.rename(rn),
                        relation: c.relation,
                    },
                    false,
                )
            })
            .collect(),
        objective: inst.objective().coeffs.iter().map(|(v, c)| (rn(v), c.clone())).collect(),
        back: to_label.iter().map(|(name, l)| (l.clone(), name.clone())).collect(),
    };

    for (i, op) in ops.iter().enumerate().rev() {
        let g = &graphs[i];
        match op {
            MinorOperation::VertexDeletion { v } => {
                w.domain.insert(v.clone(), Domain::Unit);
                let vi = g.require(v)?;
                for &t in g.neighbors(vi) {
                    w.rows.push(redundant_row(v, g.label(t)));
                }
            }
            MinorOperation::EdgeDeletion { u, v } => w.rows.push(redundant_row(u, v)),
            MinorOperation::EdgeContraction { u, v, w: merged } => contract(&mut w, g, u, v, merged)?,
        }
    }

    let order: Vec<String> = host.labels().to_vec();
    let vars: Vec<Variable> = order
        .iter()
        .map(|l| {
            w.domain
                .get(l)
                .map(|&domain| Variable { name: l.clone(), domain })
                .ok_or_else(|| Error::Invalid(format!("lifting lost vertex `{l}`")))
        })
        .collect::<Result<_>>()?;
    let redundant = w.rows.iter().enumerate().filter(|(_, r)| r.1).map(|(i, _)| i).collect();
    let instance = POInstance::new(
        vars,
        w.rows.into_iter().map(|r| r.0).collect(),
        Objective {
            sense: inst.objective().sense,
            coeffs: w.objective,
        },
    )?;
    if !instance.intersection_graph().same_labeled(host) {
        return Err(Error::Invalid("lifted intersection graph differs from the host".into()));
    }
    Ok(LiftedInstance {
        instance,
        host: host.clone(),
        ops: ops.to_vec(),
        back_map: w.back,
        relabel: to_label.iter().map(|(name, l)| (l.clone(), name.clone())).collect(),
        redundant,
        original: inst.clone(),
    })
}

fn contract(w: &mut Work, g: &Graph, u: &str, v: &str, merged: &str) -> Result<()> {
    let dom = w
        .domain
        .remove(merged)
        .ok_or_else(|| Error::Invalid(format!("no variable `{merged}` to split")))?;
    let (ui, vi) = (g.require(u)?, g.require(v)?);
    let nu: BTreeSet<&str> = g.neighbors(ui).iter().map(|&t| g.label(t)).filter(|&t| t != v).collect();
    let nv: BTreeSet<&str> = g.neighbors(vi).iter().map(|&t| g.label(t)).filter(|&t| t != u).collect();
    let to = |target: &str| {
        let target = target.to_string();
        move |x: &str| if x == merged { target.clone() } else { x.to_string() }
    };
    let mut had_integrality = false;
    let mut rows = Vec::with_capacity(w.rows.len() + 4);
    for (c, red) in std::mem::take(&mut w.rows) {
        let vs = c.poly.variables();
        if !vs.contains(merged) {
            rows.push((c, red));
            continue;
        }
        let sides: Vec<&str> = if vs.len() == 1 {
            if c.relation == Relation::Eq0 && integrality_var(&c.poly).is_some() {
                had_integrality = true;
            }
            vec![u, v]
        } else {
            let t = vs.iter().find(|x| x.as_str() != merged).unwrap();
            let mut s = Vec::new();
            if nu.contains(t.as_str()) {
                s.push(u);
            }
            if nv.contains(t.as_str()) {
                s.push(v);
            }
            if s.is_empty() {
                return Err(Error::Invalid(format!("`{t}` neighbours neither `{u}` nor `{v}`")));
            }
            s
        };
        for side in sides {
            rows.push((
                Constraint {
                    poly: c.poly.rename(to(side)),
                    relation: c.relation,
                },
                red,
            ));
        }
    }
    rows.push((Constraint::eq0(&Polynomial::var(u) - &Polynomial::var(v)), false));
    if dom == Domain::Unit && !had_integrality {
        rows.push((Constraint::eq0(integrality(u)), false));
        rows.push((Constraint::eq0(integrality(v)), false));
    }
    w.rows = rows;
    w.domain.insert(u.to_string(), dom);
    w.domain.insert(v.to_string(), dom);
    if let Some(c) = w.objective.remove(merged) {
        w.objective.insert(u.to_string(), c);
    }
    if let Some(o) = w.back.remove(merged) {
        w.back.insert(u.to_string(), o.clone());
        w.back.insert(v.to_string(), o);
    }
    Ok(())
}

/// Maps a feasible point of the lifted instance to the original instance:
/// each original variable takes the common value of its copies.
pub fn pullback_solution(l: &LiftedInstance, z: &Assignment) -> Result<Assignment> {
    if !l.instance.is_feasible(z)? {
        return Err(Error::Infeasible("point is not feasible for the lifted instance".into()));
    }
    let mut x: Assignment = BTreeMap::new();
    for (lifted, orig) in &l.back_map {
        let val = &z[lifted];
        match x.get(orig) {
            Some(prev) if prev != val => {
                return Err(Error::Infeasible(format!("copies of `{orig}` disagree")));
            }
            Some(_) => {}
            None => {
                x.insert(orig.clone(), val.clone());
            }
        }
    }
    if !l.original.is_feasible(&x)? {
        return Err(Error::Infeasible("pulled-back point violates the original instance".into()));
    }
    let (a, b) = (l.instance.objective_value(z)?, l.original.objective_value(&x)?);
    if a != b {
        return Err(Error::Invalid(format!(
            "objective changed under pullback: {a} vs {b}"
        )));
    }
    Ok(x)
}

/// Objective restricted to integral variables.
pub fn integral_objective(inst: &POInstance, z: &Assignment) -> Result<Rational> {
    let integral = integral_vars(inst);
    let mut total = Rational::zero();
    for (v, c) in &inst.objective().coeffs {
        if integral.contains(v) {
            total += c * z.get(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
        }
    }
    Ok(total)
}
