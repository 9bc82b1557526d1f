//! Small exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

pub(crate) fn to_q(p: &[i64]) -> Vec<Rational> {
    p.iter().map(|&c| Rational::from_integer(c.into())).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(m: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    pivots
}

pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : M x = 0}` where `M` has `cols` columns.
pub(crate) fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Differences `p_i - p_0` as rational rows.
pub(crate) fn directions(points: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let Some(p0) = points.first() else {
        return Vec::new();
    };
    points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(&a, &b)| Rational::from_integer((a - b).into())).collect())
        .collect()
}

/// Dimension of the affine hull; `None` for the empty set.
pub(crate) fn affine_dim(points: &[Vec<i64>]) -> Option<usize> {
    (!points.is_empty()).then(|| rank(&directions(points)))
}

/// Positive multiple with coprime integer entries.
pub(crate) fn primitive(v: &[Rational]) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dot_int(a: &[Rational], p: &[i64]) -> Rational {
    a.iter()
        .zip(p)
        .filter(|(_, &c)| c != 0)
        .map(|(x, &c)| x * Rational::from_integer(c.into()))
        .sum()
}
