//! Two-phase primal simplex over exact rationals with Bland's rule.

use serde::{Deserialize, Serialize};

use super::program::{LinearProgram, RowRel};
use super::q::{Q, ONE, ZERO};
use crate::po::Sense;
use crate::rational::{serde_q, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl std::fmt::Display for LpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPSolution {
    pub status: LpStatus,
    #[serde(with = "serde_q::opt")]
    pub objective: Option<Rational>,
    /// Column values; empty unless optimal.
    #[serde(with = "serde_q::vec")]
    pub values: Vec<Rational>,
    /// Row duals for the program as stated: the reduced costs are
    /// `c - Aᵀy`. Empty unless optimal.
    #[serde(with = "serde_q::vec")]
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

impl LPSolution {
    fn without_point(status: LpStatus, pivots: usize) -> Self {
        Self {
            status,
            objective: None,
            values: Vec::new(),
            duals: Vec::new(),
            pivots,
        }
    }
}

/// How an original column is expressed in nonnegative standard-form columns.
struct ColMap {
    offset: Rational,
    parts: Vec<(usize, i32)>,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    /// reduced costs; last entry is minus the objective value
    obj: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let pv = self.rows[p][q].clone();
        if pv != ONE {
            for x in self.rows[p].iter_mut() {
                if !x.is_zero() {
                    *x = x.div(&pv);
                }
            }
        }
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !self.rows[p][j].is_zero()).collect();
        let prow = std::mem::take(&mut self.rows[p]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == p || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &j in &nz {
                row[j] = row[j].sub_mul(&f, &prow[j]);
            }
        }
        if !self.obj[q].is_zero() {
            let f = self.obj[q].clone();
            for &j in &nz {
                self.obj[j] = self.obj[j].sub_mul(&f, &prow[j]);
            }
        }
        self.rows[p] = prow;
        self.basis[p] = q;
        self.pivots += 1;
    }

    /// Runs Bland's rule to optimality. Returns `false` if unbounded.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        loop {
            let Some(q) = (0..self.ncols).find(|&j| allowed[j] && self.obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i).div(a);
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((p, _)) => self.pivot(p, q),
                None => return false,
            }
        }
    }

    fn set_costs(&mut self, cost: &[Q]) {
        let mut obj: Vec<Q> = cost.to_vec();
        obj.push(ZERO);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, x) in self.rows[i].iter().enumerate() {
                if !x.is_zero() {
                    obj[j] = obj[j].sub_mul(cb, x);
                }
            }
        }
        self.obj = obj;
    }
}

/// Solves `lp` exactly. Entering columns are the lowest-indexed with
/// positive reduced cost, leaving rows break ratio ties by the lowest basic
/// column, so the method cannot cycle and is bit-reproducible.
pub fn solve_lp(lp: &LinearProgram) -> LPSolution {
    // columns in standard form
    let mut maps = Vec::with_capacity(lp.n_cols());
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for v in lp.vars() {
        let m = match (&v.lower, &v.upper) {
            (Some(l), u) => {
                let c = ncols;
                ncols += 1;
                if let Some(u) = u {
                    bound_rows.push((c, u - l));
                }
                ColMap {
                    offset: l.clone(),
                    parts: vec![(c, 1)],
                }
            }
            (None, Some(u)) => {
                ncols += 1;
                ColMap {
                    offset: u.clone(),
                    parts: vec![(ncols - 1, -1)],
                }
            }
            (None, None) => {
                ncols += 2;
                ColMap {
                    offset: Rational::from_integer(0.into()),
                    parts: vec![(ncols - 2, 1), (ncols - 1, -1)],
                }
            }
        };
        maps.push(m);
    }

    // rows: (sparse coeffs over structural cols, rel, rhs)
    let mut srows: Vec<(Vec<(usize, Q)>, RowRel, Rational)> = Vec::new();
    for r in lp.rows() {
        let mut rhs = r.rhs.clone();
        let mut coeffs = Vec::new();
        for (j, a) in &r.coeffs {
            rhs -= a * &maps[*j].offset;
            for &(c, s) in &maps[*j].parts {
                let v = if s > 0 { a.clone() } else { -a.clone() };
                coeffs.push((c, Q::from_rational(&v)));
            }
        }
        srows.push((coeffs, r.rel, rhs));
    }
    for (c, u) in &bound_rows {
        srows.push((vec![(*c, ONE)], RowRel::Le, u.clone()));
    }
    let m = srows.len();
    let n_orig_rows = lp.n_rows();

    // normalize rhs >= 0 and add slack / artificial columns
    let mut flip = vec![1i32; m];
    let mut rels = Vec::with_capacity(m);
    for (i, (coeffs, rel, rhs)) in srows.iter_mut().enumerate() {
        if *rhs < Rational::from_integer(0.into()) {
            flip[i] = -1;
            *rhs = -rhs.clone();
            for (_, a) in coeffs.iter_mut() {
                *a = a.neg();
            }
            *rel = match rel {
                RowRel::Le => RowRel::Ge,
                RowRel::Ge => RowRel::Le,
                RowRel::Eq => RowRel::Eq,
            };
        }
        rels.push(*rel);
    }
    let mut extra_of_row = vec![(None, 0usize); m];
    let mut artificial = Vec::new();
    for (i, rel) in rels.iter().enumerate() {
        match rel {
            RowRel::Le => {
                extra_of_row[i] = (None, ncols);
                ncols += 1;
            }
            RowRel::Ge => {
                extra_of_row[i] = (Some(ncols), ncols + 1);
                artificial.push(ncols + 1);
                ncols += 2;
            }
            RowRel::Eq => {
                extra_of_row[i] = (None, ncols);
                artificial.push(ncols);
                ncols += 1;
            }
        }
    }
    let mut is_art = vec![false; ncols];
    for &a in &artificial {
        is_art[a] = true;
    }
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, (coeffs, _, rhs)) in srows.iter().enumerate() {
        let mut row = vec![ZERO; ncols + 1];
        for (c, a) in coeffs {
            row[*c] = row[*c].add(a);
        }
        let (surplus, basic) = extra_of_row[i];
        if let Some(s) = surplus {
            row[s] = Q::S(-1, 1);
        }
        row[basic] = ONE;
        row[ncols] = Q::from_rational(rhs);
        rows.push(row);
        basis.push(basic);
    }
    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        ncols,
        pivots: 0,
    };

    if !artificial.is_empty() {
        let cost: Vec<Q> = (0..ncols).map(|j| if is_art[j] { Q::S(-1, 1) } else { ZERO }).collect();
        t.set_costs(&cost);
        let all = vec![true; ncols];
        t.optimize(&all);
        if t.obj[ncols].is_positive() {
            // phase-one optimum −z > 0 means the artificial sum cannot reach zero
            return LPSolution::without_point(LpStatus::Infeasible, t.pivots);
        }
        // drive zero-level artificials out where possible
        for i in 0..m {
            if is_art[t.basis[i]] {
                if let Some(q) = (0..ncols).find(|&j| !is_art[j] && !t.rows[i][j].is_zero()) {
                    t.pivot(i, q);
                }
            }
        }
    }

    let sign = if lp.sense() == Sense::Max { 1 } else { -1 };
    let mut cost = vec![ZERO; ncols];
    let mut const_obj = Rational::from_integer(0.into());
    for (j, c) in lp.objective() {
        let c = if sign > 0 { c.clone() } else { -c.clone() };
        const_obj += &c * &maps[*j].offset;
        for &(col, s) in &maps[*j].parts {
            let v = if s > 0 { c.clone() } else { -c.clone() };
            cost[col] = cost[col].add(&Q::from_rational(&v));
        }
    }
    t.set_costs(&cost);
    let allowed: Vec<bool> = (0..ncols).map(|j| !is_art[j]).collect();
    if !t.optimize(&allowed) {
        return LPSolution::without_point(LpStatus::Unbounded, t.pivots);
    }

    let mut xs = vec![ZERO; ncols];
    for (i, &b) in t.basis.iter().enumerate() {
        xs[b] = t.rhs(i).clone();
    }
    let values: Vec<Rational> = maps
        .iter()
        .map(|mp| {
            let mut v = mp.offset.clone();
            for &(c, s) in &mp.parts {
                let x = xs[c].to_rational();
                if s > 0 {
                    v += x;
                } else {
                    v -= x;
                }
            }
            v
        })
        .collect();
    let duals: Vec<Rational> = (0..n_orig_rows)
        .map(|i| {
            let y = t.obj[extra_of_row[i].1].neg().to_rational();
            let y = if flip[i] < 0 { -y } else { y };
            if sign > 0 {
                y
            } else {
                -y
            }
        })
        .collect();
    let objective = lp.objective_value(&values);
    debug_assert!(lp.is_feasible(&values), "simplex returned an infeasible point");
    debug_assert_eq!(
        objective,
        {
            let z = t.obj[ncols].neg().to_rational() + const_obj;
            if sign > 0 {
                z
            } else {
                -z
            }
        }
    );
    LPSolution {
        status: LpStatus::Optimal,
        objective: Some(objective),
        values,
        duals,
        pivots: t.pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::certificate::check_optimality;
    use crate::rational::{int, ratio};

    #[test]
    fn tiny_cases() {
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var("x", Some(int(0)), None).unwrap();
        lp.add_row("r", vec![(x, int(1))], RowRel::Le, int(1)).unwrap();
        lp.set_objective(Sense::Max, vec![(x, int(1))]).unwrap();
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective, Some(int(1)));
        check_optimality(&lp, &s.values, &s.duals).unwrap();

        lp.add_row("g", vec![(x, int(1))], RowRel::Ge, int(2)).unwrap();
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);

        let mut ub = LinearProgram::new(Sense::Max);
        let y = ub.add_var("y", None, None).unwrap();
        ub.set_objective(Sense::Max, vec![(y, int(1))]).unwrap();
        assert_eq!(solve_lp(&ub).status, LpStatus::Unbounded);
    }

    #[test]
    fn mixed_bounds_and_min() {
        // min x - 2y s.t. x + y >= 1/2, y <= 3/4, x in [-1, 2], y free, x - y = -1/4
        let mut lp = LinearProgram::new(Sense::Min);
        let x = lp.add_var("x", Some(int(-1)), Some(int(2))).unwrap();
        let y = lp.add_var("y", None, None).unwrap();
        lp.add_row("a", vec![(x, int(1)), (y, int(1))], RowRel::Ge, ratio(1, 2)).unwrap();
        lp.add_row("b", vec![(y, int(1))], RowRel::Le, ratio(3, 4)).unwrap();
        lp.add_row("c", vec![(x, int(1)), (y, int(-1))], RowRel::Eq, ratio(-1, 4)).unwrap();
        lp.set_objective(Sense::Min, vec![(x, int(1)), (y, int(-2))]).unwrap();
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.values, vec![ratio(1, 2), ratio(3, 4)]);
        assert_eq!(s.objective, Some(int(-1)));
        check_optimality(&lp, &s.values, &s.duals).unwrap();
    }

    #[test]
    fn degenerate_redundant_equalities() {
        let mut lp = LinearProgram::new(Sense::Max);
        let a = lp.add_var("a", Some(int(0)), None).unwrap();
        let b = lp.add_var("b", Some(int(0)), None).unwrap();
        lp.add_row("e1", vec![(a, int(1)), (b, int(1))], RowRel::Eq, int(1)).unwrap();
        lp.add_row("e2", vec![(a, int(2)), (b, int(2))], RowRel::Eq, int(2)).unwrap();
        lp.add_row("e3", vec![(a, int(1))], RowRel::Le, int(0)).unwrap();
        lp.set_objective(Sense::Max, vec![(a, int(3)), (b, int(1))]).unwrap();
        let s = solve_lp(&lp);
        assert_eq!(s.objective, Some(int(1)));
        check_optimality(&lp, &s.values, &s.duals).unwrap();
    }

    #[test]
    fn random_lps_have_certificates() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut optimal = 0;
        for _ in 0..200 {
            let n = rng.gen_range(1..6);
            let m = rng.gen_range(0..6);
            let mut lp = LinearProgram::new(if rng.gen_bool(0.5) { Sense::Max } else { Sense::Min });
            for j in 0..n {
                let lo = rng.gen_bool(0.8).then(|| int(rng.gen_range(-2..1)));
                let hi = rng.gen_bool(0.6).then(|| int(rng.gen_range(1..4)));
                lp.add_var(format!("x{j}"), lo, hi).unwrap();
            }
            for i in 0..m {
                let mut coeffs = Vec::new();
                for j in 0..n {
                    if rng.gen_bool(0.7) {
                        coeffs.push((j, ratio(rng.gen_range(-4..5), rng.gen_range(1..4))));
                    }
                }
                let rel = [RowRel::Le, RowRel::Ge, RowRel::Eq][rng.gen_range(0..3)];
                lp.add_row(format!("r{i}"), coeffs, rel, ratio(rng.gen_range(-3..6), rng.gen_range(1..3)))
                    .unwrap();
            }
            let obj = (0..n).map(|j| (j, int(rng.gen_range(-3..4)))).collect();
            let sense = lp.sense();
            lp.set_objective(sense, obj).unwrap();
            let s = solve_lp(&lp);
            if s.status == LpStatus::Optimal {
                optimal += 1;
                check_optimality(&lp, &s.values, &s.duals).unwrap();
            }
        }
        assert!(optimal > 50);
    }
}
