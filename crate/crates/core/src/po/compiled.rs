//! Constraint checks on grid points in integer arithmetic.
//!
//! A point is given as integers `k` with `x = k / D` for a fixed `D`. A
//! constraint `f` of degree `ρ` is multiplied by `L·D^ρ` (`L` the lcm of its
//! coefficient denominators) so that `F(k) = L·D^ρ·f(k/D)` is an integer
//! polynomial in `k`. Comparisons against a tolerance are done on `F` with
//! the tolerance scaled the same way; if anything overflows `i128` the check
//! falls back to exact rationals.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::instance::Relation;
use super::polynomial::Polynomial;
use crate::rational::{lcm_of_denominators, Rational};

#[derive(Clone, Debug)]
struct Term {
    scaled: Option<i128>,
    coeff: Rational,
    vars: Vec<(usize, u32)>,
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledConstraint {
    terms: Vec<Term>,
    relation: Relation,
    den: i128,
    /// scaled tolerance as a reduced fraction, if it fits
    tol_scaled: Option<(i128, i128)>,
    tol: Rational,
}

impl CompiledConstraint {
    /// `index` maps variable names to positions in the `k` slices passed to
    /// [`CompiledConstraint::check`].
    pub(crate) fn new(
        poly: &Polynomial,
        relation: Relation,
        tol: &Rational,
        den: i128,
        index: impl Fn(&str) -> usize,
    ) -> Self {
        let rho = poly.degree();
        let l = lcm_of_denominators(poly.terms().values());
        let d = BigInt::from(den);
        let mut terms = Vec::with_capacity(poly.terms().len());
        for (m, c) in poly.terms() {
            let deg: u32 = m.values().sum();
            let s = c * Rational::from_integer(&l * num_traits::pow(d.clone(), (rho - deg) as usize));
            debug_assert!(s.is_integer());
            terms.push(Term {
                scaled: s.to_integer().to_i128(),
                coeff: c.clone(),
                vars: m.iter().map(|(v, &p)| (index(v), p)).collect(),
            });
        }
        let scale = Rational::from_integer(l * num_traits::pow(d, rho as usize));
        let ts = tol * scale;
        let tol_scaled = match (ts.numer().to_i128(), ts.denom().to_i128()) {
            (Some(n), Some(d)) => Some((n, d)),
            _ => None,
        };
        Self {
            terms,
            relation,
            den,
            tol_scaled,
            tol: tol.clone(),
        }
    }

    /// Positions of the variables this constraint reads.
    pub(crate) fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().flat_map(|t| t.vars.iter().map(|&(i, _)| i))
    }

    fn scaled_value(&self, k: &[i128]) -> Option<i128> {
        let mut total: i128 = 0;
        for t in &self.terms {
            let mut v = t.scaled?;
            for &(i, p) in &t.vars {
                for _ in 0..p {
                    v = v.checked_mul(k[i])?;
                }
            }
            total = total.checked_add(v)?;
        }
        Some(total)
    }

    fn exact_value(&self, k: &[i128]) -> Rational {
        let d = BigInt::from(self.den);
        let mut total = Rational::zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for &(i, p) in &t.vars {
                v *= num_traits::pow(Rational::new(BigInt::from(k[i]), d.clone()), p as usize);
            }
            total += v;
        }
        total
    }

    /// `f >= -tol` for inequalities, `|f| <= tol` for equalities.
    pub(crate) fn check(&self, k: &[i128]) -> bool {
        if let (Some(f), Some((tn, td))) = (self.scaled_value(k), self.tol_scaled) {
            if let Some(lhs) = f.checked_mul(td) {
                return match self.relation {
                    Relation::Ge0 => lhs >= -tn,
                    Relation::Eq0 => lhs.abs() <= tn,
                };
            }
        }
        let f = self.exact_value(k);
        match self.relation {
            Relation::Ge0 => f >= -self.tol.clone(),
            Relation::Eq0 => f.abs() <= self.tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::po::integrality;
    use crate::rational::{int, ratio};

    #[test]
    fn agrees_with_exact_evaluation() {
        let p = integrality("x");
        let tol = ratio(1, 10);
        let c = CompiledConstraint::new(&p, Relation::Eq0, &tol, 100, |_| 0);
        for k in 0..=100i128 {
            let x = Rational::new(BigInt::from(k), BigInt::from(100));
            let f = p.eval(&[("x".to_string(), x)].into_iter().collect()).unwrap();
            assert_eq!(c.check(&[k]), f.abs() <= tol, "k={k}");
        }
        let huge = Polynomial::term(Rational::from_integer(BigInt::from(10).pow(40)), &[("x", 3)]);
        let c = CompiledConstraint::new(&huge, Relation::Ge0, &int(0), 1 << 20, |_| 0);
        assert!(c.check(&[5]));
    }
}
