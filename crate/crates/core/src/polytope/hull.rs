//! Facet enumeration by the double description method.
//!
//! The facets of a full-dimensional `conv(Y)` are the extreme rays of the
//! cone `{(a, b) : a·y <= b for all y in Y}`. Lower-dimensional sets are
//! first projected onto pivot coordinates of their affine hull, where the
//! projection is injective.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{directions, dot, dot_int, nullspace, primitive, rref, to_q};
use super::points::PointSet;
use crate::error::{Error, Result};
use crate::rational::{format_rational, serde_q, Rational};

pub const DEFAULT_HULL_CAP: usize = 8;

/// `a·x <= b`, or `a·x = b` when stored as an equation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(with = "serde_q::vec")]
    pub a: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub b: Rational,
}

impl Halfspace {
    pub fn slack(&self, p: &[i64]) -> Rational {
        &self.b - dot_int(&self.a, p)
    }

    pub fn render_eq(&self) -> String {
        self.render("=")
    }

    fn render(&self, rel: &str) -> String {
        let mut s = String::new();
        for (i, c) in self.a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mag = c.abs();
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if !mag.is_one() {
                s.push_str(&format_rational(&mag));
            }
            s.push_str(&format!("x{}", i + 1));
        }
        if s.is_empty() {
            s.push('0');
        }
        format!("{s} {rel} {}", format_rational(&self.b))
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("<="))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolytope {
    pub ambient_dim: usize,
    pub dim: usize,
    /// Affine hull, each row read as `a·x = b`.
    pub equations: Vec<Halfspace>,
    /// Irredundant facet-defining inequalities.
    pub facets: Vec<Halfspace>,
}

impl HPolytope {
    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.ambient_dim
            && self.equations.iter().all(|e| e.slack(p).is_zero())
            && self.facets.iter().all(|f| !f.slack(p).is_negative())
    }

    pub fn equation_strings(&self) -> Vec<String> {
        self.equations.iter().map(|e| e.render_eq()).collect()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let h: HPolytope = serde_json::from_str(s).map_err(|e| Error::Invalid(format!("polytope JSON: {e}")))?;
        for row in h.equations.iter().chain(&h.facets) {
            if row.a.len() != h.ambient_dim {
                return Err(Error::Invalid("row length differs from the ambient dimension".into()));
            }
        }
        Ok(h)
    }
}

/// Sign convention for equations: first nonzero coefficient positive.
fn normalize_equation(a: Vec<Rational>, b: Rational) -> Halfspace {
    let mut v = a;
    v.push(b);
    let mut v = primitive(&v);
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    let b = v.pop().unwrap();
    Halfspace { a: v, b }
}

pub fn convex_hull_facets(s: &PointSet, cap: usize) -> Result<HPolytope> {
    if s.is_empty() {
        return Err(Error::Invalid("convex hull of an empty set".into()));
    }
    let n = s.dim();
    let pts = s.points();
    let mut dirs = directions(pts);
    let p0 = to_q(&pts[0]);
    let equations: Vec<Halfspace> = nullspace(&dirs, n)
        .into_iter()
        .map(|a| {
            let b = dot(&a, &p0);
            normalize_equation(a, b)
        })
        .collect();
    let pivots = rref(&mut dirs);
    let d = pivots.len();
    if d > cap {
        return Err(Error::CapExceeded {
            what: "hull dimension",
            size: d,
            cap,
            hint: "",
        });
    }
    let proj: Vec<Vec<i64>> = pts.iter().map(|p| pivots.iter().map(|&c| p[c]).collect()).collect();
    let mut facets: Vec<Halfspace> = if d == 0 {
        Vec::new()
    } else {
        facet_cone_rays(&proj, d)
            .into_iter()
            .map(|r| {
                let mut a = vec![Rational::zero(); n];
                for (k, &c) in pivots.iter().enumerate() {
                    a[c] = r[k].clone();
                }
                let mut v = a;
                v.push(r[d].clone());
                let mut v = primitive(&v);
                let b = v.pop().unwrap();
                Halfspace { a: v, b }
            })
            .collect()
    };
    facets.sort();
    facets.dedup();
    Ok(HPolytope {
        ambient_dim: n,
        dim: d,
        equations,
        facets,
    })
}

struct Ray {
    v: Vec<Rational>,
    zeros: Vec<u64>,
}

fn has(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Extreme rays `(a, b)` of `{b - a·y >= 0}` for a full-dimensional point set.
fn facet_cone_rays(pts: &[Vec<i64>], d: usize) -> Vec<Vec<Rational>> {
    let m = pts.len();
    let words = m.div_ceil(64);
    let cons: Vec<Vec<Rational>> = pts
        .iter()
        .map(|y| {
            let mut g: Vec<Rational> = y.iter().map(|&c| Rational::from_integer((-c).into())).collect();
            g.push(Rational::one());
            g
        })
        .collect();

    // d+1 linearly independent constraints give a simplicial start
    let mut basis: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (i, g) in cons.iter().enumerate() {
        let mut trial = rows.clone();
        trial.push(g.clone());
        if super::linalg::rank(&trial) == trial.len() {
            rows = trial;
            basis.push(i);
            if basis.len() == d + 1 {
                break;
            }
        }
    }
    assert_eq!(basis.len(), d + 1, "point set is full-dimensional after projection");
    let k = d + 1;
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    rref(&mut aug);
    let mut rays: Vec<Ray> = (0..k)
        .map(|j| {
            let v: Vec<Rational> = (0..k).map(|i| aug[i][k + j].clone()).collect();
            let mut zeros = vec![0u64; words];
            for (t, &bi) in basis.iter().enumerate() {
                if t != j {
                    set(&mut zeros, bi);
                }
            }
            Ray { v: primitive(&v), zeros }
        })
        .collect();
    let mut done = vec![0u64; words];
    for &bi in &basis {
        set(&mut done, bi);
    }

    for (ci, g) in cons.iter().enumerate() {
        if has(&done, ci) {
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|r| dot(g, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                let mut zeros = r.zeros.clone();
                if vals[i].is_zero() {
                    set(&mut zeros, ci);
                }
                next.push(Ray { v: r.v.clone(), zeros });
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[q].zeros).map(|(a, b)| a & b).collect();
                let count: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (count as usize) + 2 < k {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, r)| t == p || t == q || !subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let v: Vec<Rational> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| &vals[p] * x - &vals[q] * y)
                    .collect();
                let mut zeros = common;
                set(&mut zeros, ci);
                next.push(Ray { v: primitive(&v), zeros });
            }
        }
        set(&mut done, ci);
        rays = next;
    }
    rays.into_iter()
        .map(|r| r.v)
        .filter(|v| v[..d].iter().any(|x| !x.is_zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn set_of(dim: usize, pts: &[&[i64]]) -> PointSet {
        PointSet::new(dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn small_polygons() {
        let sq = set_of(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let h = convex_hull_facets(&sq, 8).unwrap();
        assert_eq!((h.dim, h.facets.len(), h.equations.len()), (2, 4, 0));
        let tri = set_of(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let h = convex_hull_facets(&tri, 8).unwrap();
        assert_eq!(h.facets.len(), 3);
        let strs: Vec<String> = h.facets.iter().map(|f| f.to_string()).collect();
        assert!(strs.contains(&"x1 + x2 <= 1".to_string()), "{strs:?}");
        assert!(strs.contains(&"-x1 <= 0".to_string()), "{strs:?}");
    }

    #[test]
    fn flat_sets_keep_equations() {
        let seg = set_of(2, &[&[1, 0], &[0, 1]]);
        let h = convex_hull_facets(&seg, 8).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(h.equation_strings(), vec!["x1 + x2 = 1"]);
        assert_eq!(h.facets.len(), 2);
        for p in seg.points() {
            assert!(h.contains(p));
        }
        assert!(!h.contains(&[1, 1]));
        let pt = set_of(3, &[&[1, 0, 1]]);
        let h = convex_hull_facets(&pt, 8).unwrap();
        assert_eq!((h.dim, h.facets.len(), h.equations.len()), (0, 0, 3));
    }

    #[test]
    fn cube_and_cap() {
        let pts: Vec<Vec<i64>> = (0..8).map(|m| (0..3).map(|j| (m >> j) & 1).collect()).collect();
        let h = convex_hull_facets(&PointSet::new(3, pts).unwrap(), 8).unwrap();
        assert_eq!(h.facets.len(), 6);
        assert!(h.facets.iter().all(|f| f.b == int(0) || f.b == int(1)));
        let big: Vec<Vec<i64>> = (0..10).map(|i| (0..9).map(|j| (i == j) as i64).collect()).collect();
        let err = convex_hull_facets(&PointSet::new(9, big).unwrap(), 8).unwrap_err();
        assert_eq!(err.kind(), "cap_exceeded");
    }

    #[test]
    fn json_round_trip() {
        let h = convex_hull_facets(&set_of(2, &[&[0, 0], &[1, 0], &[0, 1]]), 8).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(HPolytope::from_json_str(&s).unwrap(), h);
    }
}
