use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::polynomial::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{format_rational, int, one, serde_q, Rational};

pub type Assignment = BTreeMap<String, Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Binary,
    Unit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "ge0")]
    Ge0,
    #[serde(rename = "eq0")]
    Eq0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub domain: Domain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub poly: Polynomial,
    pub relation: Relation,
}

impl Constraint {
    pub fn ge0(poly: Polynomial) -> Self {
        Self {
            poly,
            relation: Relation::Ge0,
        }
    }

    pub fn eq0(poly: Polynomial) -> Self {
        Self {
            poly,
            relation: Relation::Eq0,
        }
    }

    pub fn holds(&self, value: &Rational) -> bool {
        match self.relation {
            Relation::Ge0 => !value.is_negative(),
            Relation::Eq0 => value.is_zero(),
        }
    }

    /// Whether `value` is within `tol` of satisfying the constraint:
    /// `f >= -tol` for inequalities, `|f| <= tol` for equalities.
    pub fn holds_within(&self, value: &Rational, tol: &Rational) -> bool {
        match self.relation {
            Relation::Ge0 => value >= &-tol,
            Relation::Eq0 => &value.abs() <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub sense: Sense,
    #[serde(with = "serde_q::map")]
    pub coeffs: BTreeMap<String, Rational>,
}

impl Objective {
    pub fn none() -> Self {
        Self {
            sense: Sense::Max,
            coeffs: BTreeMap::new(),
        }
    }

    /// Whether `a` is strictly better than `b` under this sense.
    pub fn better(&self, a: &Rational, b: &Rational) -> bool {
        match self.sense {
            Sense::Max => a > b,
            Sense::Min => a < b,
        }
    }
}

/// A polynomial optimization instance over binary and `[0, 1]` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct POInstance {
    vars: Vec<Variable>,
    index: HashMap<String, usize>,
    constraints: Vec<Constraint>,
    objective: Objective,
}

/// Per-constraint outcome of an ε-feasibility check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintSlack {
    pub index: usize,
    #[serde(with = "serde_q")]
    pub value: Rational,
    #[serde(with = "serde_q")]
    pub tolerance: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsReport {
    pub feasible: bool,
    pub domain_ok: bool,
    pub slacks: Vec<ConstraintSlack>,
}

impl EpsReport {
    /// Largest violation beyond the constraint's own tolerance-free
    /// requirement: `max(0, -f)` for inequalities, `|f|` for equalities.
    pub fn max_violation(&self, inst: &POInstance) -> Rational {
        self.slacks
            .iter()
            .map(|s| match inst.constraints[s.index].relation {
                Relation::Ge0 => (-s.value.clone()).max(Rational::zero()),
                Relation::Eq0 => s.value.abs(),
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl POInstance {
    pub fn new(vars: Vec<Variable>, constraints: Vec<Constraint>, objective: Objective) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            if v.name.is_empty() {
                return Err(Error::Invalid("empty variable name".into()));
            }
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate variable `{}`", v.name)));
            }
        }
        for c in &constraints {
            for v in c.poly.variables() {
                if !index.contains_key(&v) {
                    return Err(Error::UnknownVariable(v));
                }
            }
        }
        for v in objective.coeffs.keys() {
            if !index.contains_key(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        let mut objective = objective;
        objective.coeffs.retain(|_, c| !c.is_zero());
        Ok(Self {
            vars,
            index,
            constraints,
            objective,
        })
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn domain(&self, name: &str) -> Option<Domain> {
        self.var_index(name).map(|i| self.vars[i].domain)
    }

    pub fn binary_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.vars[i].domain == Domain::Binary).collect()
    }

    pub fn continuous_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.vars[i].domain == Domain::Unit).collect()
    }

    pub fn is_pure_binary(&self) -> bool {
        self.vars.iter().all(|v| v.domain == Domain::Binary)
    }

    /// Largest constraint degree, at least 1.
    pub fn degree(&self) -> u32 {
        self.constraints.iter().map(|c| c.poly.degree()).max().unwrap_or(0).max(1)
    }

    /// `‖c_N‖₁`: objective 1-norm restricted to continuous variables.
    pub fn continuous_objective_norm(&self) -> Rational {
        self.objective
            .coeffs
            .iter()
            .filter(|(v, _)| self.domain(v) == Some(Domain::Unit))
            .map(|(_, c)| c.abs())
            .sum()
    }

    pub fn objective_value(&self, x: &Assignment) -> Result<Rational> {
        let mut total = Rational::zero();
        for (v, c) in &self.objective.coeffs {
            let val = x.get(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            total += c * val;
        }
        Ok(total)
    }

    /// Every variable assigned, binaries in {0, 1}, continuous in [0, 1].
    pub fn check_domains(&self, x: &Assignment) -> Result<()> {
        for v in &self.vars {
            let val = x.get(&v.name).ok_or_else(|| Error::UnknownVariable(v.name.clone()))?;
            let ok = match v.domain {
                Domain::Binary => val.is_zero() || *val == one(),
                Domain::Unit => !val.is_negative() && *val <= one(),
            };
            if !ok {
                return Err(Error::Invalid(format!(
                    "value {} outside the domain of `{}`",
                    format_rational(val),
                    v.name
                )));
            }
        }
        for k in x.keys() {
            if !self.index.contains_key(k) {
                return Err(Error::UnknownVariable(k.clone()));
            }
        }
        Ok(())
    }

    /// Checks `f_i(x) >= -ε‖f_i‖₁` (inequalities) and `|f_i(x)| <= ε‖f_i‖₁`
    /// (equalities), plus domain membership. With `ε = 0` this is exact
    /// feasibility.
    pub fn eps_feasible(&self, x: &Assignment, eps: &Rational) -> Result<EpsReport> {
        let domain_ok = self.check_domains(x).is_ok();
        let mut slacks = Vec::with_capacity(self.constraints.len());
        for (i, c) in self.constraints.iter().enumerate() {
            let value = c.poly.eval(x)?;
            let tolerance = eps * c.poly.norm1();
            let ok = c.holds_within(&value, &tolerance);
            slacks.push(ConstraintSlack {
                index: i,
                value,
                tolerance,
                ok,
            });
        }
        Ok(EpsReport {
            feasible: domain_ok && slacks.iter().all(|s| s.ok),
            domain_ok,
            slacks,
        })
    }

    pub fn is_feasible(&self, x: &Assignment) -> Result<bool> {
        Ok(self.eps_feasible(x, &Rational::zero())?.feasible)
    }

    /// One vertex per variable; an edge for each pair sharing a constraint.
    pub fn intersection_graph(&self) -> Graph {
        let mut g = Graph::new();
        for v in &self.vars {
            g.add_vertex(v.name.clone()).unwrap();
        }
        for c in &self.constraints {
            let vs: Vec<usize> = c.poly.variables().iter().map(|v| self.index[v]).collect();
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    g.add_edge_idx(a, b).unwrap();
                }
            }
        }
        g
    }

    /// Byte length of the canonical serialization.
    pub fn encoding_size(&self) -> usize {
        self.canonical_json().len()
    }

    /// Serialization with variables sorted by name and monomials sorted by
    /// exponent vector; coefficients as reduced fractions.
    pub fn canonical_json(&self) -> String {
        let mut j = self.to_json();
        j.vars.sort_by(|a, b| a.name.cmp(&b.name));
        serde_json::to_string(&j).expect("instance serializes")
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            vars: self.vars.clone(),
            objective: self.objective.clone(),
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintJson {
                    relation: c.relation,
                    monomials: c
                        .poly
                        .terms()
                        .iter()
                        .map(|(m, coeff)| MonomialJson {
                            coeff: coeff.clone(),
                            powers: m.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: InstanceJson) -> Result<Self> {
        let constraints = j
            .constraints
            .into_iter()
            .map(|c| Constraint {
                poly: Polynomial::from_terms(c.monomials.into_iter().map(|m| (m.powers, m.coeff))),
                relation: c.relation,
            })
            .collect();
        Self::new(j.vars, constraints, j.objective)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("instance serializes")
    }

    /// Same instance with the objective replaced.
    pub fn with_objective(&self, objective: Objective) -> Result<Self> {
        Self::new(self.vars.clone(), self.constraints.clone(), objective)
    }

    /// Variables sorted by index that appear in constraint `i`.
    pub fn support(&self, i: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.constraints[i]
            .poly
            .variables()
            .iter()
            .map(|v| self.index[v])
            .collect();
        s.sort_unstable();
        s
    }

    pub fn supports(&self) -> Vec<Vec<usize>> {
        (0..self.constraints.len()).map(|i| self.support(i)).collect()
    }

    pub fn var_names(&self) -> BTreeSet<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub vars: Vec<Variable>,
    pub objective: Objective,
    #[serde(default)]
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub relation: Relation,
    pub monomials: Vec<MonomialJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    #[serde(with = "serde_q")]
    pub coeff: Rational,
    #[serde(default)]
    pub powers: Monomial,
}

/// Helper for building instances in code and tests.
#[derive(Default)]
pub struct InstanceBuilder {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    coeffs: BTreeMap<String, Rational>,
    sense: Option<Sense>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn binary(mut self, name: &str) -> Self {
        self.vars.push(Variable {
            name: name.into(),
            domain: Domain::Binary,
        });
        self
    }

    pub fn unit(mut self, name: &str) -> Self {
        self.vars.push(Variable {
            name: name.into(),
            domain: Domain::Unit,
        });
        self
    }

    pub fn ge0(mut self, p: Polynomial) -> Self {
        self.constraints.push(Constraint::ge0(p));
        self
    }

    pub fn eq0(mut self, p: Polynomial) -> Self {
        self.constraints.push(Constraint::eq0(p));
        self
    }

    pub fn maximize(mut self, coeffs: &[(&str, Rational)]) -> Self {
        self.sense = Some(Sense::Max);
        self.coeffs = coeffs.iter().map(|(v, c)| (v.to_string(), c.clone())).collect();
        self
    }

    pub fn minimize(mut self, coeffs: &[(&str, Rational)]) -> Self {
        self.sense = Some(Sense::Min);
        self.coeffs = coeffs.iter().map(|(v, c)| (v.to_string(), c.clone())).collect();
        self
    }

    pub fn build(self) -> Result<POInstance> {
        POInstance::new(
            self.vars,
            self.constraints,
            Objective {
                sense: self.sense.unwrap_or(Sense::Max),
                coeffs: self.coeffs,
            },
        )
    }
}

/// `x² − x`, the integrality polynomial for a unit variable.
pub fn integrality(name: &str) -> Polynomial {
    &Polynomial::term(int(1), &[(name, 2)]) - &Polynomial::var(name)
}
