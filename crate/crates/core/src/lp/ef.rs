//! Extended formulations from tree decompositions of the intersection graph.
//!
//! For every bag the locally feasible partial assignments become columns
//! `λ_{b,a} ≥ 0`. Rows:
//!
//! * `conv_b`: `Σ_a λ_{b,a} = 1`;
//! * `glue_c_k`: for a bag `c` with parent `p` and each assignment `k` of
//!   their shared variables, `Σ_{a|k} λ_{c,a} − Σ_{a|k} λ_{p,a} = 0`;
//! * `link_v`: `x_v − Σ_a a(v)·λ_{b,a} = 0` in the smallest bag `b` holding `v`.
//!
//! Columns `x_v ∈ [0, 1]` come first, in instance order. In approximate mode
//! continuous variables range over the grid `{0, γ, ..., 1}`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::program::{LinearProgram, RowRel};
use super::simplex::{LPSolution, LpStatus};
use crate::error::{Error, Result};
use crate::graph::{verify_decomposition, TreeDecomposition};
use crate::po::compiled::CompiledConstraint;
use crate::po::{Assignment, Domain, POInstance, Relation};
use crate::rational::{format_rational, largest_dyadic_at_most, one, serde_q, Rational};

/// Default limit on the total number of `λ` columns.
pub const DEFAULT_EF_COLUMN_CAP: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EfMode {
    ExactBinary,
    Eps(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BagEntry {
    /// Instance variable indices, ascending.
    pub vars: Vec<usize>,
    /// Each assignment lists, per bag variable, an index into that
    /// variable's domain.
    pub assignments: Vec<Vec<u32>>,
    pub columns: Vec<usize>,
    pub conv_row: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueRow {
    pub child: usize,
    pub parent: usize,
    /// Domain indices of the shared variables, ascending by variable.
    pub key: Vec<u32>,
    pub row: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BagTable {
    pub var_names: Vec<String>,
    #[serde(with = "domains_serde")]
    pub domains: Vec<Vec<Rational>>,
    pub bags: Vec<BagEntry>,
    /// BFS order from bag 0.
    pub order: Vec<usize>,
    pub parent: Vec<Option<usize>>,
    pub glue: Vec<GlueRow>,
    pub link_bag: Vec<usize>,
    pub x_columns: Vec<usize>,
    pub link_rows: Vec<usize>,
    #[serde(with = "serde_q::opt")]
    pub epsilon: Option<Rational>,
    #[serde(with = "serde_q::opt")]
    pub gamma: Option<Rational>,
}

mod domains_serde {
    use super::*;
    use serde::{de::Error as _, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = d.iter().map(|vs| vs.iter().map(format_rational).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let v: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        v.iter()
            .map(|vs| vs.iter().map(serde_q::from_value).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)
    }
}

impl BagTable {
    /// Number of `λ` columns.
    pub fn lambda_columns(&self) -> usize {
        self.bags.iter().map(|b| b.columns.len()).sum()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.vars.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// `#bags · base^{width+1}` with `base = 2` (exact) or `1/γ + 1`.
    pub fn column_bound(&self) -> u128 {
        let base: u128 = match &self.gamma {
            None => 2,
            Some(g) => g.recip().to_integer().to_u128().unwrap_or(u128::MAX).saturating_add(1),
        };
        let mut b: u128 = 1;
        for _ in 0..=self.width() {
            b = b.saturating_mul(base);
        }
        b.saturating_mul(self.bags.len() as u128)
    }

    pub fn value(&self, var: usize, idx: u32) -> &Rational {
        &self.domains[var][idx as usize]
    }

    /// The partial assignment behind column `i` of bag `b`.
    pub fn local_assignment(&self, b: usize, i: usize) -> Assignment {
        let bag = &self.bags[b];
        bag.vars
            .iter()
            .zip(&bag.assignments[i])
            .map(|(&v, &d)| (self.var_names[v].clone(), self.value(v, d).clone()))
            .collect()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("bag tables serialize")
    }

    pub fn from_json_str(s: &str) -> Result<BagTable> {
        let t: BagTable = serde_json::from_str(s)?;
        t.check_shape()?;
        Ok(t)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.var_names.len();
        let bad = |m: &str| Err(Error::Invalid(format!("malformed bag table: {m}")));
        if self.domains.len() != n || self.link_bag.len() != n || self.x_columns.len() != n || self.link_rows.len() != n {
            return bad("per-variable arrays disagree in length");
        }
        if self.parent.len() != self.bags.len() || self.order.len() != self.bags.len() {
            return bad("per-bag arrays disagree in length");
        }
        for b in &self.bags {
            if b.columns.len() != b.assignments.len() {
                return bad("column list does not match assignments");
            }
            for a in &b.assignments {
                if a.len() != b.vars.len() {
                    return bad("assignment width differs from bag size");
                }
                for (&v, &d) in b.vars.iter().zip(a) {
                    if v >= n || d as usize >= self.domains[v].len() {
                        return bad("assignment out of range");
                    }
                }
            }
        }
        if self.link_bag.iter().any(|&b| b >= self.bags.len()) {
            return bad("link bag out of range");
        }
        let mut seen = vec![false; self.bags.len()];
        for &b in &self.order {
            if b >= self.bags.len() || std::mem::replace(&mut seen[b], true) {
                return bad("order is not a permutation of the bags");
            }
        }
        for g in &self.glue {
            if g.child >= self.bags.len() || g.parent >= self.bags.len() {
                return bad("glue row references a missing bag");
            }
        }
        Ok(())
    }

    /// Positions (in `b`'s and `p`'s variable lists) of their shared variables.
    pub(crate) fn separator(&self, c: usize, p: usize) -> (Vec<usize>, Vec<usize>) {
        let (vc, vp) = (&self.bags[c].vars, &self.bags[p].vars);
        let mut pc = Vec::new();
        let mut pp = Vec::new();
        for (i, v) in vc.iter().enumerate() {
            if let Ok(j) = vp.binary_search(v) {
                pc.push(i);
                pp.push(j);
            }
        }
        (pc, pp)
    }
}

fn project(a: &[u32], pos: &[usize]) -> Vec<u32> {
    pos.iter().map(|&i| a[i]).collect()
}

/// `λ`-based extended formulation of `conv(S)` for a pure-binary instance.
pub fn build_exact_binary_ef(inst: &POInstance, td: &TreeDecomposition) -> Result<(LinearProgram, BagTable)> {
    build_ef(inst, td, &EfMode::ExactBinary, DEFAULT_EF_COLUMN_CAP)
}

/// Grid-discretized formulation whose feasible points are ε-feasible.
pub fn build_eps_ef(inst: &POInstance, eps: &Rational, td: &TreeDecomposition) -> Result<(LinearProgram, BagTable)> {
    build_ef(inst, td, &EfMode::Eps(eps.clone()), DEFAULT_EF_COLUMN_CAP)
}

struct Check {
    c: CompiledConstraint,
    /// sorted variable indices
    support: Vec<usize>,
}

/// Lowest value of a linear constraint over the unit box, if it is linear.
fn box_minimum(inst: &POInstance, i: usize) -> Option<Rational> {
    let p = &inst.constraints()[i].poly;
    if !p.is_linear() {
        return None;
    }
    let mut m = p.constant_term();
    for v in p.variables() {
        let a = p.linear_coeff(&v);
        if a.is_negative() {
            m += a;
        }
    }
    Some(m)
}

pub fn build_ef(inst: &POInstance, td: &TreeDecomposition, mode: &EfMode, column_cap: usize) -> Result<(LinearProgram, BagTable)> {
    let n = inst.n();
    let g = inst.intersection_graph();
    let violations = verify_decomposition(&g, td);
    if !violations.is_empty() {
        return Err(Error::InvalidDecomposition(
            serde_json::to_string(&violations).expect("violations serialize"),
        ));
    }
    let (den, eps, gamma) = match mode {
        EfMode::ExactBinary => {
            if let Some(v) = inst.vars().iter().find(|v| v.domain != Domain::Binary) {
                return Err(Error::Precondition(format!(
                    "exact formulation needs binary variables; `{}` is continuous",
                    v.name
                )));
            }
            (1i128, None, None)
        }
        EfMode::Eps(eps) => {
            if !eps.is_positive() {
                return Err(Error::Invalid("epsilon must be positive".into()));
            }
            let rho = Rational::from_integer(BigInt::from(inst.degree()));
            let gamma = largest_dyadic_at_most(&(eps / (Rational::from_integer(2.into()) * rho)));
            let den = gamma
                .recip()
                .to_integer()
                .to_i128()
                .filter(|&d| d <= 1 << 24)
                .ok_or(Error::Overflow("grid denominator"))?;
            (den, Some(eps.clone()), Some(gamma))
        }
    };

    // which constraints hold on the whole box and can be ignored
    let box_valid: Vec<bool> = (0..inst.constraints().len())
        .map(|i| inst.constraints()[i].relation == Relation::Ge0 && box_minimum(inst, i).is_some_and(|m| !m.is_negative()))
        .collect();

    let mut domain_k: Vec<Vec<i128>> = inst
        .vars()
        .iter()
        .map(|v| match v.domain {
            Domain::Binary => vec![0, den],
            Domain::Unit => {
                let inert = inst.objective().coeffs.get(&v.name).is_none()
                    && inst
                        .constraints()
                        .iter()
                        .enumerate()
                        .all(|(c, con)| box_valid[c] || !con.poly.variables().contains(&v.name));
                if inert {
                    vec![0]
                } else {
                    (0..=den).collect()
                }
            }
        })
        .collect();

    let mut checks: Vec<Check> = Vec::new();
    let mut infeasible = false;
    let half = Rational::new(1.into(), 2.into());
    for (i, con) in inst.constraints().iter().enumerate() {
        if box_valid[i] {
            continue;
        }
        let support = inst.support(i);
        let all_binary = support.iter().all(|&v| inst.vars()[v].domain == Domain::Binary);
        let tol = match &eps {
            Some(e) if !all_binary => e * &half * con.poly.norm1(),
            _ => Rational::zero(),
        };
        let c = CompiledConstraint::new(&con.poly, con.relation, &tol, den, |v| inst.var_index(v).unwrap());
        match support.len() {
            0 => infeasible |= !c.check(&vec![0; n]),
            1 => {
                let v = support[0];
                let mut k = vec![0i128; n];
                domain_k[v].retain(|&val| {
                    k[v] = val;
                    c.check(&k)
                });
            }
            _ => checks.push(Check { c, support }),
        }
    }
    if infeasible {
        for d in &mut domain_k {
            d.clear();
        }
    }
    for ch in &checks {
        if !td.bags.iter().any(|b| ch.support.iter().all(|v| b.binary_search(v).is_ok())) {
            return Err(Error::InvalidDecomposition(format!(
                "no bag contains the support {:?}",
                ch.support.iter().map(|&v| &inst.vars()[v].name).collect::<Vec<_>>()
            )));
        }
    }

    // enumerate locally feasible assignments per bag
    let tables: Vec<Result<Vec<Vec<u32>>>> = td
        .bags
        .par_iter()
        .map(|bag| enumerate_bag(bag, &checks, &domain_k, n, column_cap))
        .collect();
    let mut tables: Vec<Vec<Vec<u32>>> = tables.into_iter().collect::<Result<_>>()?;
    let total: usize = tables.iter().map(Vec::len).sum();
    if total > column_cap {
        return Err(Error::CapExceeded {
            what: "extended formulation",
            size: total,
            cap: column_cap,
            hint: "; increase epsilon or use a narrower decomposition",
        });
    }

    let (order, parent) = td.rooted();
    let bags: Vec<BagEntry> = td
        .bags
        .iter()
        .map(|b| BagEntry {
            vars: b.clone(),
            assignments: Vec::new(),
            columns: Vec::new(),
            conv_row: 0,
        })
        .collect();
    let domains: Vec<Vec<Rational>> = domain_k
        .iter()
        .map(|d| d.iter().map(|&k| Rational::new(BigInt::from(k), BigInt::from(den))).collect())
        .collect();
    let mut table = BagTable {
        var_names: inst.vars().iter().map(|v| v.name.clone()).collect(),
        domains,
        bags,
        order,
        parent,
        glue: Vec::new(),
        link_bag: (0..n)
            .map(|v| td.bags.iter().position(|b| b.binary_search(&v).is_ok()).expect("valid decomposition covers every variable"))
            .collect(),
        x_columns: Vec::new(),
        link_rows: Vec::new(),
        epsilon: eps,
        gamma,
    };

    // convert values to domain indices
    for (b, rows) in tables.iter_mut().enumerate() {
        let vars = &td.bags[b];
        for a in rows.iter_mut() {
            for (slot, &v) in a.iter_mut().zip(vars) {
                *slot = domain_k[v].binary_search(&(*slot as i128)).expect("value from domain") as u32;
            }
        }
    }

    semi_join(&table, &mut tables);
    for (b, rows) in tables.into_iter().enumerate() {
        table.bags[b].assignments = rows;
    }

    let lp = emit_lp(inst, &mut table)?;
    let bound = table.column_bound();
    assert!(
        (table.lambda_columns() as u128) <= bound,
        "column count {} exceeds {}",
        table.lambda_columns(),
        bound
    );
    Ok((lp, table))
}

fn enumerate_bag(bag: &[usize], checks: &[Check], domain_k: &[Vec<i128>], n: usize, cap: usize) -> Result<Vec<Vec<u32>>> {
    // constraints inside this bag, checked once their last variable is set
    let mut at: Vec<Vec<&CompiledConstraint>> = vec![Vec::new(); bag.len()];
    for ch in checks {
        let pos: Option<Vec<usize>> = ch.support.iter().map(|v| bag.binary_search(v).ok()).collect();
        if let Some(pos) = pos {
            at[*pos.iter().max().unwrap()].push(&ch.c);
        }
    }
    let mut out = Vec::new();
    let mut k = vec![0i128; n];
    let mut cur = vec![0u32; bag.len()];
    struct Ctx<'a> {
        bag: &'a [usize],
        at: &'a [Vec<&'a CompiledConstraint>],
        domain_k: &'a [Vec<i128>],
        cap: usize,
    }
    fn rec(cx: &Ctx, p: usize, k: &mut Vec<i128>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) -> bool {
        if p == cx.bag.len() {
            out.push(cur.clone());
            return out.len() <= cx.cap;
        }
        let v = cx.bag[p];
        for &val in &cx.domain_k[v] {
            k[v] = val;
            if cx.at[p].iter().all(|c| c.check(k)) {
                // values are stored raw here and mapped to indices later
                cur[p] = val as u32;
                if !rec(cx, p + 1, k, cur, out) {
                    return false;
                }
            }
        }
        k[v] = 0;
        true
    }
    let cx = Ctx { bag, at: &at, domain_k, cap };
    if !rec(&cx, 0, &mut k, &mut cur, &mut out) {
        return Err(Error::CapExceeded {
            what: "extended formulation",
            size: out.len(),
            cap,
            hint: "; increase epsilon or use a narrower decomposition",
        });
    }
    Ok(out)
}

/// Removes assignments without a consistent partner in a neighbouring bag.
/// Such columns are forced to zero by the glue rows, so the projection of
/// the formulation is unchanged.
fn semi_join(table: &BagTable, tables: &mut [Vec<Vec<u32>>]) {
    for &c in table.order.iter().rev() {
        if let Some(p) = table.parent[c] {
            let (pc, pp) = table.separator(c, p);
            let keys: HashSet<Vec<u32>> = tables[c].iter().map(|a| project(a, &pc)).collect();
            tables[p].retain(|a| keys.contains(&project(a, &pp)));
        }
    }
    for &c in &table.order {
        if let Some(p) = table.parent[c] {
            let (pc, pp) = table.separator(c, p);
            let keys: HashSet<Vec<u32>> = tables[p].iter().map(|a| project(a, &pp)).collect();
            tables[c].retain(|a| keys.contains(&project(a, &pc)));
        }
    }
}

fn emit_lp(inst: &POInstance, table: &mut BagTable) -> Result<LinearProgram> {
    let mut lp = LinearProgram::new(inst.objective().sense);
    for name in &table.var_names {
        let c = lp.add_var(format!("x_{name}"), Some(Rational::zero()), Some(one()))?;
        table.x_columns.push(c);
    }
    for b in 0..table.bags.len() {
        let cols: Vec<usize> = (0..table.bags[b].assignments.len())
            .map(|i| lp.add_var(format!("l_{b}_{i}"), Some(Rational::zero()), None))
            .collect::<Result<_>>()?;
        table.bags[b].columns = cols;
    }
    for b in 0..table.bags.len() {
        let coeffs = table.bags[b].columns.iter().map(|&c| (c, one())).collect();
        table.bags[b].conv_row = lp.add_row(format!("conv_{b}"), coeffs, RowRel::Eq, one())?;
    }
    let order = table.order.clone();
    for &c in &order {
        let Some(p) = table.parent[c] else { continue };
        let (pc, pp) = table.separator(c, p);
        if pc.is_empty() {
            continue;
        }
        let mut rows: BTreeMap<Vec<u32>, Vec<(usize, Rational)>> = BTreeMap::new();
        for (a, &col) in table.bags[c].assignments.iter().zip(&table.bags[c].columns) {
            rows.entry(project(a, &pc)).or_default().push((col, one()));
        }
        for (a, &col) in table.bags[p].assignments.iter().zip(&table.bags[p].columns) {
            rows.entry(project(a, &pp)).or_default().push((col, -one()));
        }
        for (i, (key, coeffs)) in rows.into_iter().enumerate() {
            let row = lp.add_row(format!("glue_{c}_{i}"), coeffs, RowRel::Eq, Rational::zero())?;
            table.glue.push(GlueRow { child: c, parent: p, key, row });
        }
    }
    for v in 0..table.var_names.len() {
        let b = table.link_bag[v];
        let pos = table.bags[b].vars.binary_search(&v).expect("link bag holds the variable");
        let mut coeffs = vec![(table.x_columns[v], one())];
        for (a, &col) in table.bags[b].assignments.iter().zip(&table.bags[b].columns) {
            let val = &table.domains[v][a[pos] as usize];
            if !val.is_zero() {
                coeffs.push((col, -val.clone()));
            }
        }
        let row = lp.add_row(format!("link_{}", table.var_names[v]), coeffs, RowRel::Eq, Rational::zero())?;
        table.link_rows.push(row);
    }
    let obj = inst
        .objective()
        .coeffs
        .iter()
        .map(|(v, c)| (table.x_columns[inst.var_index(v).unwrap()], c.clone()))
        .collect();
    lp.set_objective(inst.objective().sense, obj)?;
    Ok(lp)
}

/// Picks one point of the support of an optimal solution by conditioning
/// bag by bag from the root: each bag takes its first column with positive
/// weight that agrees with the variables already fixed.
pub fn extract_assignment(sol: &LPSolution, table: &BagTable) -> Result<Assignment> {
    if sol.status != LpStatus::Optimal {
        return Err(Error::NotOptimal(format!("cannot extract from a {} solution", sol.status)));
    }
    let mut fixed: Vec<Option<u32>> = vec![None; table.var_names.len()];
    for &b in &table.order {
        let bag = &table.bags[b];
        let pick = bag.assignments.iter().zip(&bag.columns).find(|(a, &col)| {
            sol.values.get(col).is_some_and(|v| v.is_positive())
                && bag.vars.iter().zip(a.iter()).all(|(&v, &d)| fixed[v].map_or(true, |f| f == d))
        });
        let Some((a, _)) = pick else {
            return Err(Error::Invalid(format!("no positive column of bag {b} agrees with its neighbours")));
        };
        for (&v, &d) in bag.vars.iter().zip(a) {
            fixed[v] = Some(d);
        }
    }
    fixed
        .iter()
        .enumerate()
        .map(|(v, d)| match d {
            Some(d) => Ok((table.var_names[v].clone(), table.value(v, *d).clone())),
            None => Err(Error::Invalid(format!("variable `{}` is in no bag", table.var_names[v]))),
        })
        .collect()
}

/// The `x` part of an LP solution.
pub fn marginals(sol: &LPSolution, table: &BagTable) -> Result<Assignment> {
    if sol.status != LpStatus::Optimal {
        return Err(Error::NotOptimal(format!("no marginals for a {} solution", sol.status)));
    }
    table
        .var_names
        .iter()
        .zip(&table.x_columns)
        .map(|(name, &c)| {
            sol.values
                .get(c)
                .map(|v| (name.clone(), v.clone()))
                .ok_or_else(|| Error::Invalid("solution is shorter than the formulation".into()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{treewidth_upper, Heuristic};
    use crate::lp::{check_optimality, solve_ef, solve_lp};
    use crate::po::{brute_force_optimum, InstanceBuilder, Polynomial, DEFAULT_BRUTE_FORCE_CAP};
    use crate::rational::{int, ratio};

    fn stab_p3() -> POInstance {
        let one = Polynomial::constant(int(1));
        let v = Polynomial::var;
        InstanceBuilder::new()
            .binary("1")
            .binary("2")
            .binary("3")
            .ge0(&(&one - &v("1")) - &v("2"))
            .ge0(&(&one - &v("2")) - &v("3"))
            .maximize(&[("1", int(1)), ("2", int(1)), ("3", int(1))])
            .build()
            .unwrap()
    }

    fn decompose(inst: &POInstance) -> TreeDecomposition {
        treewidth_upper(&inst.intersection_graph(), Heuristic::MinFill).decomposition
    }

    #[test]
    fn stable_sets_of_p3() {
        let inst = stab_p3();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let (lp, table) = build_exact_binary_ef(&inst, &td).unwrap();
        assert_eq!(table.lambda_columns(), 6);
        let s = solve_lp(&lp);
        assert_eq!(s.objective, Some(int(2)));
        let x = extract_assignment(&s, &table).unwrap();
        assert_eq!(x, [("1", 1), ("2", 0), ("3", 1)].iter().map(|(k, v)| (k.to_string(), int(*v))).collect());
        let t = solve_ef(&lp, &table).unwrap();
        assert_eq!(t.objective, Some(int(2)));
        assert_eq!(extract_assignment(&t, &table).unwrap(), x);
    }

    #[test]
    fn single_free_binary() {
        let inst = InstanceBuilder::new().binary("x").maximize(&[("x", int(1))]).build().unwrap();
        let (lp, table) = build_exact_binary_ef(&inst, &decompose(&inst)).unwrap();
        assert_eq!(table.lambda_columns(), 2);
        assert_eq!(solve_lp(&lp).objective, Some(int(1)));
        let min = inst.with_objective(crate::po::Objective { sense: crate::po::Sense::Min, coeffs: inst.objective().coeffs.clone() }).unwrap();
        let (lp, table) = build_exact_binary_ef(&min, &decompose(&min)).unwrap();
        assert_eq!(solve_ef(&lp, &table).unwrap().objective, Some(int(0)));
    }

    #[test]
    fn contradictory_equations_give_an_empty_table() {
        let x = Polynomial::var("x1");
        let inst = InstanceBuilder::new()
            .binary("x1")
            .eq0(x.clone())
            .eq0(&Polynomial::constant(int(1)) - &x)
            .build()
            .unwrap();
        let (lp, table) = build_exact_binary_ef(&inst, &decompose(&inst)).unwrap();
        assert_eq!(table.lambda_columns(), 0);
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);
        assert_eq!(solve_ef(&lp, &table).unwrap().status, LpStatus::Infeasible);
        assert_eq!(extract_assignment(&solve_lp(&lp), &table).unwrap_err().kind(), "not_optimal");
    }

    #[test]
    fn square_root_bound() {
        let x = Polynomial::var("x");
        let inst = InstanceBuilder::new()
            .unit("x")
            .ge0(&Polynomial::constant(ratio(1, 2)) - &(&x * &x))
            .maximize(&[("x", int(1))])
            .build()
            .unwrap();
        let eps = ratio(1, 100);
        let (lp, table) = build_eps_ef(&inst, &eps, &decompose(&inst)).unwrap();
        assert_eq!(table.gamma, Some(ratio(1, 512)));
        let s = solve_ef(&lp, &table).unwrap();
        let x = extract_assignment(&s, &table).unwrap()["x"].clone();
        assert!(&x * &x <= ratio(515, 1000));
        let fine = brute_force_optimum(&inst, &ratio(1, 10000), DEFAULT_BRUTE_FORCE_CAP).unwrap().unwrap();
        assert!(x >= fine.value - &eps);
        assert_eq!(solve_lp(&lp).objective, s.objective);
    }

    #[test]
    fn binary_instances_ignore_epsilon() {
        let inst = stab_p3();
        let td = decompose(&inst);
        let (_, exact) = build_exact_binary_ef(&inst, &td).unwrap();
        let (_, approx) = build_eps_ef(&inst, &ratio(1, 2), &td).unwrap();
        assert_eq!(exact.bags, approx.bags);
    }

    #[test]
    fn one_third_on_a_grid() {
        let x = Polynomial::var("x");
        let third = Polynomial::constant(ratio(1, 3));
        let inst = InstanceBuilder::new()
            .unit("x")
            .ge0(&x - &third)
            .ge0(&third - &x)
            .build()
            .unwrap();
        let eps = ratio(1, 10);
        let (lp, table) = build_eps_ef(&inst, &eps, &decompose(&inst)).unwrap();
        assert!(table.lambda_columns() > 0);
        let s = solve_lp(&lp);
        let a = extract_assignment(&s, &table).unwrap();
        assert!(inst.eps_feasible(&a, &eps).unwrap().feasible);
    }

    #[test]
    fn rejects_bad_input() {
        let inst = stab_p3();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]);
        assert_eq!(build_exact_binary_ef(&inst, &td).unwrap_err().kind(), "invalid_decomposition");
        let td = decompose(&inst);
        assert_eq!(build_eps_ef(&inst, &int(0), &td).unwrap_err().kind(), "invalid");
        let u = InstanceBuilder::new().unit("z").build().unwrap();
        assert_eq!(build_exact_binary_ef(&u, &decompose(&u)).unwrap_err().kind(), "precondition");
    }

    #[test]
    fn table_json_round_trip() {
        let inst = stab_p3();
        let (lp, table) = build_eps_ef(&inst, &ratio(1, 4), &decompose(&inst)).unwrap();
        let back = BagTable::from_json_str(&table.to_json_string()).unwrap();
        assert_eq!(back, table);
        let s = solve_ef(&lp, &back).unwrap();
        check_optimality(&lp, &s.values, &s.duals).unwrap();
        assert!(BagTable::from_json_str("{}").is_err());
    }

    #[test]
    fn inert_variables_collapse() {
        let v = Polynomial::var;
        let inst = InstanceBuilder::new()
            .unit("a")
            .binary("b")
            .ge0(&v("a") + &v("b"))
            .maximize(&[("b", int(1))])
            .build()
            .unwrap();
        let (_, table) = build_eps_ef(&inst, &ratio(1, 20), &decompose(&inst)).unwrap();
        assert_eq!(table.domains[0], vec![int(0)]);
        assert_eq!(table.lambda_columns(), 2);
    }
}
