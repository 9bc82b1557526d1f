use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

/// Exponent vector: variable name to positive power. Variables with power
/// zero are never stored.
pub type Monomial = BTreeMap<String, u32>;

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
    degree: u32,
    norm1: Rational,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms([(Monomial::new(), c)])
    }

    pub fn var(name: &str) -> Self {
        Self::term(int(1), &[(name, 1)])
    }

    /// `coeff * Π name^power`.
    pub fn term(coeff: Rational, powers: &[(&str, u32)]) -> Self {
        let mut m = Monomial::new();
        for &(v, p) in powers {
            if p > 0 {
                *m.entry(v.to_string()).or_insert(0) += p;
            }
        }
        Self::from_terms([(m, coeff)])
    }

    /// Sums the given terms, merging equal monomials and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (mut m, c) in terms {
            m.retain(|_, p| *p > 0);
            *map.entry(m).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let degree = map.keys().map(|m| m.values().sum()).max().unwrap_or(0);
        let norm1 = map.values().map(|c| c.abs()).sum();
        Self {
            terms: map,
            degree,
            norm1,
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    /// Maximum total power over monomials; zero for constants.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Sum of absolute coefficient values.
    pub fn norm1(&self) -> &Rational {
        &self.norm1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_linear(&self) -> bool {
        self.degree <= 1
    }

    /// Variables appearing with nonzero coefficient.
    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.keys().cloned()).collect()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::new()).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the degree-one monomial in `v`.
    pub fn linear_coeff(&self, v: &str) -> Rational {
        let m: Monomial = [(v.to_string(), 1)].into_iter().collect();
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, k: &Rational) -> Polynomial {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * k)))
    }

    /// Renames variables through `f`; merges terms that collide.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Polynomial {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut out = Monomial::new();
            for (v, p) in m {
                *out.entry(f(v)).or_insert(0) += p;
            }
            (out, c.clone())
        }))
    }

    /// Exact value with variable values supplied by `lookup`.
    pub fn eval_with<'a>(&self, lookup: impl Fn(&str) -> Option<&'a Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &p) in m {
                let x = lookup(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
                t *= num_traits::pow(x.clone(), p as usize);
            }
            total += t;
        }
        Ok(total)
    }

    pub fn eval(&self, x: &BTreeMap<String, Rational>) -> Result<Rational> {
        self.eval_with(|v| x.get(v))
    }

    /// Value at floating-point inputs, for heuristics only.
    pub fn eval_f64(&self, lookup: impl Fn(&str) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .fold(crate::rational::to_f64(c), |acc, (v, &p)| acc * lookup(v).powi(p as i32))
            })
            .sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().chain(rhs.terms.iter()).map(|(m, c)| (m.clone(), c.clone())))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), -c)))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = ma.clone();
                for (v, p) in mb {
                    *m.entry(v.clone()).or_insert(0) += p;
                }
                out.push((m, ca * cb));
            }
        }
        Polynomial::from_terms(out)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            let unit = a == int(1);
            if !unit || m.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            }
            for (j, (v, p)) in m.iter().enumerate() {
                if j > 0 || !unit {
                    write!(f, "*")?;
                }
                write!(f, "{v}")?;
                if *p > 1 {
                    write!(f, "^{p}")?;
                }
            }
        }
        Ok(())
    }
}
