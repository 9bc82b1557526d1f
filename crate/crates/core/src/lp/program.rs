use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::po::Sense;
use crate::rational::{format_rational, serde_q, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowRel {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl RowRel {
    fn symbol(self) -> &'static str {
        match self {
            RowRel::Le => "<=",
            RowRel::Eq => "=",
            RowRel::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpVar {
    pub name: String,
    #[serde(with = "serde_q::opt", default)]
    pub lower: Option<Rational>,
    #[serde(with = "serde_q::opt", default)]
    pub upper: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    /// Sparse coefficients by column index, sorted, no zeros.
    pub coeffs: Vec<(usize, Rational)>,
    pub rel: RowRel,
    pub rhs: Rational,
}

/// A linear program over rational data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    vars: Vec<LpVar>,
    index: HashMap<String, usize>,
    rows: Vec<Row>,
    objective: Vec<(usize, Rational)>,
    sense: Sense,
}

impl Default for LinearProgram {
    fn default() -> Self {
        Self::new(Sense::Max)
    }
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        Self {
            vars: Vec::new(),
            index: HashMap::new(),
            rows: Vec::new(),
            objective: Vec::new(),
            sense,
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: Option<Rational>, upper: Option<Rational>) -> Result<usize> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::Invalid(format!("duplicate LP variable `{name}`")));
        }
        if let (Some(l), Some(u)) = (&lower, &upper) {
            if l > u {
                return Err(Error::Invalid(format!("empty bounds on `{name}`")));
            }
        }
        let i = self.vars.len();
        self.index.insert(name.clone(), i);
        self.vars.push(LpVar { name, lower, upper });
        Ok(i)
    }

    pub fn add_row(&mut self, name: impl Into<String>, coeffs: Vec<(usize, Rational)>, rel: RowRel, rhs: Rational) -> Result<usize> {
        let mut merged: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, c) in coeffs {
            if j >= self.vars.len() {
                return Err(Error::Invalid(format!("row references missing column {j}")));
            }
            *merged.entry(j).or_insert_with(Rational::zero) += c;
        }
        merged.retain(|_, c| !c.is_zero());
        self.rows.push(Row {
            name: name.into(),
            coeffs: merged.into_iter().collect(),
            rel,
            rhs,
        });
        Ok(self.rows.len() - 1)
    }

    pub fn set_objective(&mut self, sense: Sense, coeffs: Vec<(usize, Rational)>) -> Result<()> {
        let mut merged: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, c) in coeffs {
            if j >= self.vars.len() {
                return Err(Error::Invalid(format!("objective references missing column {j}")));
            }
            *merged.entry(j).or_insert_with(Rational::zero) += c;
        }
        merged.retain(|_, c| !c.is_zero());
        self.sense = sense;
        self.objective = merged.into_iter().collect();
        Ok(())
    }

    pub fn vars(&self) -> &[LpVar] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective(&self) -> &[(usize, Rational)] {
        &self.objective
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn n_cols(&self) -> usize {
        self.vars.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn col(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn row_activity(&self, row: &Row, x: &[Rational]) -> Rational {
        row.coeffs.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    /// Names of violated rows and bounds at `x` (exact).
    pub fn violations(&self, x: &[Rational]) -> Vec<String> {
        let mut out = Vec::new();
        if x.len() != self.vars.len() {
            out.push(format!("expected {} values, got {}", self.vars.len(), x.len()));
            return out;
        }
        for (v, val) in self.vars.iter().zip(x) {
            if v.lower.as_ref().is_some_and(|l| val < l) || v.upper.as_ref().is_some_and(|u| val > u) {
                out.push(format!("bound on {}", v.name));
            }
        }
        for r in &self.rows {
            let a = self.row_activity(r, x);
            let ok = match r.rel {
                RowRel::Le => a <= r.rhs,
                RowRel::Eq => a == r.rhs,
                RowRel::Ge => a >= r.rhs,
            };
            if !ok {
                out.push(r.name.clone());
            }
        }
        out
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        self.violations(x).is_empty()
    }

    /// CPLEX-style LP text. Rational coefficients are written as decimals
    /// when exact, otherwise as `p/q`, which most readers accept only after
    /// scaling; row names are kept.
    pub fn to_lp_text(&self) -> String {
        let mut s = String::new();
        let term_list = |coeffs: &[(usize, Rational)]| -> String {
            if coeffs.is_empty() {
                return "0".to_string();
            }
            let mut t = String::new();
            for (k, (j, c)) in coeffs.iter().enumerate() {
                let neg = c.is_negative();
                if k > 0 {
                    t.push_str(if neg { " - " } else { " + " });
                } else if neg {
                    t.push_str("- ");
                }
                let a = c.abs();
                if a != Rational::from_integer(1.into()) {
                    t.push_str(&lp_number(&a));
                    t.push(' ');
                }
                t.push_str(&self.vars[*j].name);
            }
            t
        };
        s.push_str(match self.sense {
            Sense::Max => "Maximize\n",
            Sense::Min => "Minimize\n",
        });
        let _ = writeln!(s, " obj: {}", term_list(&self.objective));
        s.push_str("Subject To\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                " {}: {} {} {}",
                r.name,
                term_list(&r.coeffs),
                r.rel.symbol(),
                lp_number(&r.rhs)
            );
        }
        s.push_str("Bounds\n");
        for v in &self.vars {
            match (&v.lower, &v.upper) {
                (None, None) => {
                    let _ = writeln!(s, " {} free", v.name);
                }
                (Some(l), Some(u)) => {
                    let _ = writeln!(s, " {} <= {} <= {}", lp_number(l), v.name, lp_number(u));
                }
                (Some(l), None) => {
                    let _ = writeln!(s, " {} >= {}", v.name, lp_number(l));
                }
                (None, Some(u)) => {
                    let _ = writeln!(s, " -inf <= {} <= {}", v.name, lp_number(u));
                }
            }
        }
        s.push_str("End\n");
        s
    }

    pub fn to_json(&self) -> LpJson {
        LpJson {
            sense: self.sense,
            vars: self.vars.clone(),
            objective: self
                .objective
                .iter()
                .map(|(j, c)| (self.vars[*j].name.clone(), c.clone()))
                .collect(),
            rows: self
                .rows
                .iter()
                .map(|r| RowJson {
                    name: r.name.clone(),
                    coeffs: r
                        .coeffs
                        .iter()
                        .map(|(j, c)| (self.vars[*j].name.clone(), c.clone()))
                        .collect(),
                    rel: r.rel,
                    rhs: r.rhs.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: LpJson) -> Result<LinearProgram> {
        let mut lp = LinearProgram::new(j.sense);
        for v in j.vars {
            lp.add_var(v.name, v.lower, v.upper)?;
        }
        let lookup = |lp: &LinearProgram, name: &str| {
            lp.col(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        };
        let mut obj = Vec::new();
        for (name, c) in j.objective {
            obj.push((lookup(&lp, &name)?, c));
        }
        lp.set_objective(j.sense, obj)?;
        for r in j.rows {
            let mut coeffs = Vec::new();
            for (name, c) in r.coeffs {
                coeffs.push((lookup(&lp, &name)?, c));
            }
            lp.add_row(r.name, coeffs, r.rel, r.rhs)?;
        }
        Ok(lp)
    }

    pub fn from_json_str(s: &str) -> Result<LinearProgram> {
        Self::from_json(serde_json::from_str(s)?)
    }
}

fn lp_number(r: &Rational) -> String {
    // finite decimal when the denominator is a product of 2s and 5s
    let mut d = r.denom().clone();
    let (two, five) = (num_bigint::BigInt::from(2), num_bigint::BigInt::from(5));
    let zero = num_bigint::BigInt::zero();
    let mut twos = 0usize;
    let mut fives = 0usize;
    while &d % &two == zero {
        d /= &two;
        twos += 1;
    }
    while &d % &five == zero {
        d /= &five;
        fives += 1;
    }
    if d != num_bigint::BigInt::from(1) {
        return format_rational(r);
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return r.numer().to_string();
    }
    let scaled = r * Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(10), digits));
    let n = scaled.to_integer();
    let neg = n < zero;
    let mut s = n.abs().to_string();
    while s.len() <= digits {
        s.insert(0, '0');
    }
    s.insert(s.len() - digits, '.');
    if neg {
        s.insert(0, '-');
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpJson {
    pub sense: Sense,
    pub vars: Vec<LpVar>,
    #[serde(with = "named_coeffs")]
    pub objective: Vec<(String, Rational)>,
    pub rows: Vec<RowJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowJson {
    pub name: String,
    #[serde(with = "named_coeffs")]
    pub coeffs: Vec<(String, Rational)>,
    pub rel: RowRel,
    #[serde(with = "serde_q")]
    pub rhs: Rational,
}

mod named_coeffs {
    //! `[[name, "p/q"], ...]`, keeping order.
    use super::*;
    use serde::{de::Error as _, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(String, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
        let out: Vec<(&str, String)> = v.iter().map(|(n, c)| (n.as_str(), format_rational(c))).collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(String, Rational)>, D::Error> {
        let raw = Vec::<(String, serde_json::Value)>::deserialize(d)?;
        raw.into_iter()
            .map(|(n, v)| serde_q::from_value(&v).map(|c| (n, c)))
            .collect::<std::result::Result<_, _>>()
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn lp_text_sections() {
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var("x", Some(int(0)), Some(int(1))).unwrap();
        let y = lp.add_var("y", None, None).unwrap();
        lp.add_row("r1", vec![(x, int(1)), (y, ratio(-1, 4))], RowRel::Le, ratio(3, 2)).unwrap();
        lp.add_row("r2", vec![(y, ratio(1, 3))], RowRel::Ge, int(0)).unwrap();
        lp.set_objective(Sense::Max, vec![(x, int(2))]).unwrap();
        let t = lp.to_lp_text();
        assert_eq!(
            t,
            "Maximize\n obj: 2 x\nSubject To\n r1: x - 0.25 y <= 1.5\n r2: 1/3 y >= 0\nBounds\n 0 <= x <= 1\n y free\nEnd\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let mut lp = LinearProgram::new(Sense::Min);
        let a = lp.add_var("a", Some(int(0)), None).unwrap();
        lp.add_row("c", vec![(a, ratio(2, 3))], RowRel::Eq, int(1)).unwrap();
        lp.set_objective(Sense::Min, vec![(a, int(1))]).unwrap();
        let s = serde_json::to_string(&lp.to_json()).unwrap();
        assert_eq!(LinearProgram::from_json_str(&s).unwrap(), lp);
        assert!(lp.is_feasible(&[ratio(3, 2)]));
        assert_eq!(lp.violations(&[int(1)]), vec!["c".to_string()]);
    }
}
