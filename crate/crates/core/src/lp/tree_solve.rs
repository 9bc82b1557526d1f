//! Exact solver for formulations produced by [`super::ef`].
//!
//! The objective lives on the `x` columns, so it pushes down to a weight on
//! each `λ` column of the bag where the variable is linked. Max-sum message
//! passing towards the root then gives an optimal 0/1 `λ`, and the messages
//! themselves are optimal duals: the glue row of child `c` and key `k` gets
//! `m_c(k)`, each component root's convexity row gets its optimum, and each
//! link row gets the objective coefficient. The returned point is checked
//! against that certificate before it is handed out.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::certificate::check_optimality;
use super::ef::BagTable;
use super::program::LinearProgram;
use super::simplex::{LPSolution, LpStatus};
use crate::error::{Error, Result};
use crate::po::Sense;
use crate::rational::{one, Rational};

pub fn solve_ef(lp: &LinearProgram, table: &BagTable) -> Result<LPSolution> {
    let nb = table.bags.len();
    if table.bags.iter().any(|b| b.assignments.is_empty()) {
        return Ok(LPSolution {
            status: LpStatus::Infeasible,
            objective: None,
            values: Vec::new(),
            duals: Vec::new(),
            pivots: 0,
        });
    }
    let sign = if lp.sense() == Sense::Max { one() } else { -one() };
    let mut col_var: HashMap<usize, usize> = HashMap::new();
    for (v, &c) in table.x_columns.iter().enumerate() {
        col_var.insert(c, v);
    }
    // objective in max form, per variable
    let mut cx = vec![Rational::zero(); table.var_names.len()];
    for (c, coef) in lp.objective() {
        let v = col_var
            .get(c)
            .ok_or_else(|| Error::Invalid("objective touches a column that is not an original variable".into()))?;
        cx[*v] = &sign * coef;
    }

    // own weights
    let mut best: Vec<Vec<Rational>> = vec![Vec::new(); nb];
    for b in 0..nb {
        let bag = &table.bags[b];
        let linked: Vec<(usize, usize)> = bag
            .vars
            .iter()
            .enumerate()
            .filter(|&(_, &v)| table.link_bag[v] == b && !cx[v].is_zero())
            .map(|(i, &v)| (i, v))
            .collect();
        best[b] = bag
            .assignments
            .iter()
            .map(|a| {
                linked
                    .iter()
                    .fold(Rational::zero(), |acc, &(i, v)| acc + &cx[v] * table.value(v, a[i]))
            })
            .collect();
    }

    // upward pass; a child sharing nothing with its parent starts a new component
    let mut seps: Vec<Option<(Vec<usize>, Vec<usize>)>> = vec![None; nb];
    let mut messages: Vec<HashMap<Vec<u32>, Rational>> = vec![HashMap::new(); nb];
    let mut roots: Vec<usize> = Vec::new();
    for &c in &table.order {
        match table.parent[c] {
            Some(p) => {
                let s = table.separator(c, p);
                if s.0.is_empty() {
                    roots.push(c);
                } else {
                    seps[c] = Some(s);
                }
            }
            None => roots.push(c),
        }
    }
    for &c in table.order.iter().rev() {
        let Some((pc, pp)) = &seps[c] else { continue };
        let p = table.parent[c].unwrap();
        let mut m: HashMap<Vec<u32>, Rational> = HashMap::new();
        for (a, w) in table.bags[c].assignments.iter().zip(&best[c]) {
            let key: Vec<u32> = pc.iter().map(|&i| a[i]).collect();
            match m.get_mut(&key) {
                Some(cur) if *cur >= *w => {}
                Some(cur) => *cur = w.clone(),
                None => {
                    m.insert(key, w.clone());
                }
            }
        }
        for i in 0..table.bags[p].assignments.len() {
            let key: Vec<u32> = pp.iter().map(|&j| table.bags[p].assignments[i][j]).collect();
            let msg = m
                .get(&key)
                .ok_or_else(|| Error::Invalid("bag tables are not pairwise consistent".into()))?;
            best[p][i] += msg;
        }
        messages[c] = m;
    }

    // downward pass: first maximizer agreeing with the parent's choice
    let mut chosen = vec![usize::MAX; nb];
    let mut total = Rational::zero();
    let mut duals = vec![Rational::zero(); lp.n_rows()];
    for &b in &table.order {
        let candidates = 0..table.bags[b].assignments.len();
        let pick = match &seps[b] {
            None => {
                let i = argmax(candidates, &best[b]);
                total += &best[b][i];
                duals[table.bags[b].conv_row] = best[b][i].clone();
                i
            }
            Some((pc, pp)) => {
                let p = table.parent[b].unwrap();
                let pa = &table.bags[p].assignments[chosen[p]];
                let want: Vec<u32> = pp.iter().map(|&j| pa[j]).collect();
                let bag = &table.bags[b];
                argmax(
                    candidates.filter(|&i| pc.iter().zip(&want).all(|(&ci, &w)| bag.assignments[i][ci] == w)),
                    &best[b],
                )
            }
        };
        chosen[b] = pick;
    }
    for g in &table.glue {
        duals[g.row] = messages[g.child][&g.key].clone();
    }
    for (v, &r) in table.link_rows.iter().enumerate() {
        duals[r] = cx[v].clone();
    }
    if sign.is_negative() {
        for y in &mut duals {
            *y = -y.clone();
        }
    }

    let mut values = vec![Rational::zero(); lp.n_cols()];
    for b in 0..nb {
        values[table.bags[b].columns[chosen[b]]] = one();
    }
    for (v, &c) in table.x_columns.iter().enumerate() {
        let b = table.link_bag[v];
        let pos = table.bags[b].vars.binary_search(&v).expect("link bag holds the variable");
        values[c] = table.value(v, table.bags[b].assignments[chosen[b]][pos]).clone();
    }
    check_optimality(lp, &values, &duals)
        .map_err(|e| Error::Invalid(format!("formulation does not match its bag table: {e}")))?;
    Ok(LPSolution {
        status: LpStatus::Optimal,
        objective: Some(&sign * total),
        values,
        duals,
        pivots: 0,
    })
}

fn argmax(candidates: impl Iterator<Item = usize>, w: &[Rational]) -> usize {
    let mut best: Option<usize> = None;
    for i in candidates {
        if best.map_or(true, |b| w[i] > w[b]) {
            best = Some(i);
        }
    }
    best.expect("consistent tables leave a candidate")
}
