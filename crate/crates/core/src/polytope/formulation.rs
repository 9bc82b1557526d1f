//! Binary formulations of point sets and the constructions that keep their
//! intersection graphs under control. Variable `i` of a formulation is
//! coordinate `i` of its points; outputs use the names `x1, x2, ...`.

use serde::Serialize;

use super::certificates::{pyramid_with_apex, PyramidCertificate};
use super::points::{cartesian_power, plus_operator, PointSet};
use crate::error::{Error, Result};
use crate::graph::{treewidth_upper, Graph, Heuristic};
use crate::po::{enumerate_feasible, Constraint, Domain, InstanceJson, Objective, POInstance, Polynomial, Variable};
use crate::rational::{int, one};

pub const DEFAULT_FORMULATION_CAP: usize = 20;

pub fn coord_name(i: usize) -> String {
    format!("x{}", i + 1)
}

fn binary_vars(n: usize) -> Vec<Variable> {
    (0..n).map(|i| Variable { name: coord_name(i), domain: Domain::Binary }).collect()
}

/// The same formulation with variables renamed `x1..xn` by position.
pub fn canonical(f: &POInstance) -> Result<POInstance> {
    if !f.is_pure_binary() {
        return Err(Error::Invalid("formulations use binary variables only".into()));
    }
    let rename = |v: &str| coord_name(f.var_index(v).expect("known variable"));
    let cons = f
        .constraints()
        .iter()
        .map(|c| Constraint { poly: c.poly.rename(rename), relation: c.relation })
        .collect();
    POInstance::new(binary_vars(f.n()), cons, Objective::none())
}

/// Linear no-good cuts excluding every 0/1 point outside `s`.
pub fn points_formulation(s: &PointSet) -> Result<POInstance> {
    s.require_binary()?;
    let n = s.dim();
    if n > DEFAULT_FORMULATION_CAP {
        return Err(Error::CapExceeded { what: "point set dimension", size: n, cap: DEFAULT_FORMULATION_CAP, hint: "" });
    }
    let mut cons = Vec::new();
    for mask in 0u64..1 << n {
        let p: Vec<i64> = (0..n).map(|j| (mask >> j & 1) as i64).collect();
        if s.contains(&p) {
            continue;
        }
        // Σ_{p_j = 1} (1 - x_j) + Σ_{p_j = 0} x_j >= 1
        let mut poly = Polynomial::constant(-one());
        for (j, &c) in p.iter().enumerate() {
            let x = Polynomial::var(&coord_name(j));
            poly = if c == 1 { &(&poly + &Polynomial::constant(one())) - &x } else { &poly + &x };
        }
        cons.push(Constraint::ge0(poly));
    }
    POInstance::new(binary_vars(n), cons, Objective::none())
}

/// `x_i + x_j <= 1` on every edge, coordinates in vertex order.
pub fn stab_formulation(g: &Graph) -> POInstance {
    let cons = g
        .edges()
        .map(|(a, b)| {
            let sum = &Polynomial::var(&coord_name(a)) + &Polynomial::var(&coord_name(b));
            Constraint::ge0(&Polynomial::constant(one()) - &sum)
        })
        .collect();
    POInstance::new(binary_vars(g.n()), cons, Objective::none()).expect("fresh names")
}

/// Feasible 0/1 points in variable order.
pub fn feasible_points(f: &POInstance, cap: u128) -> Result<PointSet> {
    if !f.is_pure_binary() {
        return Err(Error::Invalid("formulations use binary variables only".into()));
    }
    let pts = enumerate_feasible(f, &int(1), cap)?
        .into_iter()
        .map(|a| f.vars().iter().map(|v| if a[&v.name] == one() { 1 } else { 0 }).collect())
        .collect();
    PointSet::new(f.n(), pts)
}

/// `(1 - t)·φ_i` in place of each row `φ_i` and `x_j <= 1 - t` for every
/// coordinate, where `t` is the new last variable.
pub fn formulation_of_plus(f: &POInstance) -> Result<POInstance> {
    let f = canonical(f)?;
    let n = f.n();
    let t = Polynomial::var(&coord_name(n));
    let one_minus_t = &Polynomial::constant(one()) - &t;
    let mut cons: Vec<Constraint> = f
        .constraints()
        .iter()
        .map(|c| Constraint { poly: &one_minus_t * &c.poly, relation: c.relation })
        .collect();
    for j in 0..n {
        cons.push(Constraint::ge0(&one_minus_t - &Polynomial::var(&coord_name(j))));
    }
    POInstance::new(binary_vars(n + 1), cons, Objective::none())
}

/// `k` disjoint copies of `f`; copy `c` owns coordinates `c·n .. (c+1)·n`.
pub fn product_formulation(f: &POInstance, k: usize) -> Result<POInstance> {
    if k < 1 {
        return Err(Error::Invalid("product formulation needs k >= 1".into()));
    }
    let f = canonical(f)?;
    let n = f.n();
    let mut cons = Vec::with_capacity(k * f.constraints().len());
    for c in 0..k {
        let shift = |v: &str| coord_name(f.var_index(v).unwrap() + c * n);
        cons.extend(
            f.constraints()
                .iter()
                .map(|row| Constraint { poly: row.poly.rename(shift), relation: row.relation }),
        );
    }
    POInstance::new(binary_vars(k * n), cons, Objective::none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HardFamilyResult {
    pub n: usize,
    pub omega: usize,
    pub k: usize,
    pub ambient_dim: usize,
    pub points: PointSet,
    /// Formulation of `points` built from no-good cuts on the seed.
    pub formulation: InstanceJson,
    pub graph_edges: usize,
    /// Min-fill width of the formulation's intersection graph.
    pub width_upper: usize,
    pub pyramid: PyramidCertificate,
    pub lower_bound: String,
}

impl HardFamilyResult {
    pub fn instance(&self) -> POInstance {
        POInstance::from_json(self.formulation.clone()).expect("built from a valid instance")
    }
}

/// `(S^{×k})⁺` with `k = ⌊(n-1)/(ω+1)⌋` for a seed on `ω` coordinates.
pub fn build_hard_family(seed: &PointSet, n: usize, omega: usize) -> Result<HardFamilyResult> {
    if omega >= n {
        return Err(Error::Invalid(format!("omega = {omega} must be at most n - 1 = {}", n.saturating_sub(1))));
    }
    if seed.is_empty() {
        return Err(Error::Invalid("seed set is empty".into()));
    }
    if seed.dim() != omega {
        return Err(Error::Invalid(format!("seed has {} coordinates, expected omega = {omega}", seed.dim())));
    }
    let k = (n - 1) / (omega + 1);
    if k == 0 {
        return Err(Error::Precondition(format!(
            "k = floor((n-1)/(omega+1)) is 0 for n = {n}, omega = {omega}"
        )));
    }
    let points = plus_operator(&cartesian_power(seed, k)?)?;
    let ambient_dim = k * (omega + 1) + 1;
    debug_assert_eq!(points.dim(), ambient_dim);

    let f = formulation_of_plus(&product_formulation(&formulation_of_plus(&points_formulation(seed)?)?, k)?)?;
    let g = f.intersection_graph();
    let width_upper = treewidth_upper(&g, Heuristic::MinFill).width;
    let pyramid = pyramid_with_apex(&points, points.len() - 1)
        .ok_or_else(|| Error::Invalid("apex lies in the affine hull of the base".into()))?;
    Ok(HardFamilyResult {
        n,
        omega,
        k,
        ambient_dim,
        points: points.with_tag("hard-family"),
        formulation: f.to_json(),
        graph_edges: g.m(),
        width_upper,
        pyramid,
        lower_bound: format!(
            "xc_SDP(S') >= {k} * xc_SDP(seed); for seeds with xc_SDP in Omega(2^f(omega)) this is \
             Omega(n/(omega+1) * 2^f(omega))"
        ),
    })
}
