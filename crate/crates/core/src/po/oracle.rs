//! Exhaustive reference solvers used as test oracles.
//!
//! Continuous variables range over the grid `{0, γ, 2γ, ..., 1}` with
//! `1/γ` a positive integer. Values are handled as integers `k` standing for
//! `k·γ`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::compiled::CompiledConstraint;
use super::instance::{Assignment, Domain, POInstance, Sense};
use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, Rational};

/// Default limit on the number of grid points an oracle may scan.
pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceResult {
    pub value: Rational,
    pub assignment: Assignment,
}

struct Grid {
    den: i128,
    order: Vec<usize>,
    values: Vec<Vec<i128>>,
    /// constraints to check once position `p` of `order` is assigned
    checks: Vec<Vec<CompiledConstraint>>,
    constant_ok: bool,
}

fn to_i128(b: &BigInt) -> Option<i128> {
    b.to_i128()
}

impl Grid {
    fn new(inst: &POInstance, grid: &Rational, cap: u128) -> Result<Self> {
        if !grid.is_positive() || !grid.recip().is_integer() {
            return Err(Error::Invalid("grid step must be 1/D for a positive integer D".into()));
        }
        let den = to_i128(&grid.recip().to_integer())
            .filter(|&d| d <= 1 << 20)
            .ok_or(Error::Overflow("grid denominator"))?;
        let mut order = inst.binary_indices();
        order.extend(inst.continuous_indices());
        let mut count: u128 = 1;
        let mut values = vec![Vec::new(); inst.n()];
        for &i in &order {
            values[i] = match inst.vars()[i].domain {
                Domain::Binary => vec![0, den],
                Domain::Unit => (0..=den).collect(),
            };
            count = count.saturating_mul(values[i].len() as u128);
        }
        if count > cap {
            return Err(Error::CapExceeded {
                what: "brute-force grid",
                size: count.min(usize::MAX as u128) as usize,
                cap: cap.min(usize::MAX as u128) as usize,
                hint: "; coarsen the grid or shrink the instance",
            });
        }
        let mut pos = vec![0usize; inst.n()];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let mut checks: Vec<Vec<CompiledConstraint>> = (0..order.len()).map(|_| Vec::new()).collect();
        let mut constant_ok = true;
        let zero = Rational::zero();
        for c in inst.constraints() {
            let comp = CompiledConstraint::new(&c.poly, c.relation, &zero, den, |v| inst.var_index(v).unwrap());
            match comp.positions().map(|v| pos[v]).max() {
                Some(p) => checks[p].push(comp),
                None => constant_ok &= comp.check(&vec![0i128; inst.n()]),
            }
        }
        Ok(Self {
            den,
            order,
            values,
            checks,
            constant_ok,
        })
    }
}

/// Exact optimum over binary assignments times the `γ`-grid on continuous
/// variables. `Ok(None)` when no grid point is feasible. Among optimal
/// points the first in enumeration order (binaries first, values ascending)
/// is returned.
pub fn brute_force_optimum(inst: &POInstance, grid: &Rational, cap: u128) -> Result<Option<BruteForceResult>> {
    let g = Grid::new(inst, grid, cap)?;
    if !g.constant_ok {
        return Ok(None);
    }
    let obj = inst.objective();
    let lc = lcm_of_denominators(obj.coeffs.values());
    // score = ±(L·c_j) · k_j, maximized
    let mut score = vec![0i128; inst.n()];
    for (v, c) in &obj.coeffs {
        let s = to_i128(&(c * Rational::from_integer(lc.clone())).to_integer())
            .ok_or(Error::Overflow("objective scaling"))?;
        score[inst.var_index(v).unwrap()] = if obj.sense == Sense::Max { s } else { -s };
    }
    let np = g.order.len();
    let mut suffix = vec![0i128; np + 1];
    for p in (0..np).rev() {
        let i = g.order[p];
        let best_here = g.values[i].iter().map(|&k| score[i] * k).max().unwrap_or(0);
        suffix[p] = suffix[p + 1]
            .checked_add(best_here)
            .ok_or(Error::Overflow("objective bound"))?;
    }
    let mut k = vec![0i128; inst.n()];
    let mut best: Option<(i128, Vec<i128>)> = None;
    search_opt(&g, &score, &suffix, 0, 0, &mut k, &mut best);
    Ok(best.map(|(_, kv)| {
        let assignment = to_assignment(inst, &kv, g.den);
        let value = inst.objective_value(&assignment).expect("all variables assigned");
        BruteForceResult { value, assignment }
    }))
}

fn search_opt(
    g: &Grid,
    score: &[i128],
    suffix: &[i128],
    p: usize,
    cur: i128,
    k: &mut Vec<i128>,
    best: &mut Option<(i128, Vec<i128>)>,
) {
    if let Some((b, _)) = best {
        if cur + suffix[p] <= *b {
            return;
        }
    }
    if p == g.order.len() {
        *best = Some((cur, k.clone()));
        return;
    }
    let i = g.order[p];
    for &val in &g.values[i] {
        k[i] = val;
        if g.checks[p].iter().all(|c| c.check(k)) {
            search_opt(g, score, suffix, p + 1, cur + score[i] * val, k, best);
        }
    }
    k[i] = 0;
}

/// All feasible grid points, in enumeration order.
pub fn enumerate_feasible(inst: &POInstance, grid: &Rational, cap: u128) -> Result<Vec<Assignment>> {
    let g = Grid::new(inst, grid, cap)?;
    let mut out = Vec::new();
    if !g.constant_ok {
        return Ok(out);
    }
    let mut k = vec![0i128; inst.n()];
    fn rec(g: &Grid, p: usize, k: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
        if p == g.order.len() {
            out.push(k.clone());
            return;
        }
        let i = g.order[p];
        for &val in &g.values[i] {
            k[i] = val;
            if g.checks[p].iter().all(|c| c.check(k)) {
                rec(g, p + 1, k, out);
            }
        }
        k[i] = 0;
    }
    let mut raw = Vec::new();
    rec(&g, 0, &mut k, &mut raw);
    out.extend(raw.iter().map(|kv| to_assignment(inst, kv, g.den)));
    Ok(out)
}

fn to_assignment(inst: &POInstance, k: &[i128], den: i128) -> Assignment {
    let d = BigInt::from(den);
    inst.vars()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.clone(), Rational::new(BigInt::from(k[i]), d.clone())))
        .collect()
}
