//! MAX-2SAT formulas, their DIMACS `wcnf` form, and the QCQP encodings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::po::{integrality, Constraint, Domain, Objective, POInstance, Polynomial, Sense, Variable};
use crate::rational::int;

/// Largest variable count accepted by [`Max2SatInstance::brute_force`].
pub const MAX_BRUTE_FORCE_VARS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        Self { var, positive }
    }

    /// DIMACS integer form: `var` or `-var`.
    pub fn from_dimacs(v: i64) -> Option<Self> {
        (v != 0).then(|| Self::new(v.unsigned_abs() as usize, v > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn eval(self, x: &[bool]) -> bool {
        x[self.var - 1] == self.positive
    }

    /// `x` or `1 - x` over the variable named `x{var}`.
    pub fn poly(self) -> Polynomial {
        let x = Polynomial::var(&x_name(self.var));
        if self.positive {
            x
        } else {
            &Polynomial::constant(int(1)) - &x
        }
    }
}

pub fn x_name(j: usize) -> String {
    format!("x{j}")
}

/// Names of the two clause indicators of clause `i` (1-based).
pub fn y_names(i: usize) -> [String; 2] {
    [format!("y{i}_1"), format!("y{i}_2")]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Max2SatInstance {
    pub n: usize,
    pub clauses: Vec<[Literal; 2]>,
    /// Grid position (row, column) of each variable, when the formula's
    /// variable graph is declared as a subgraph of a grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<usize, (usize, usize)>>,
}

impl Max2SatInstance {
    pub fn new(n: usize, clauses: Vec<[Literal; 2]>) -> Result<Self> {
        let f = Self {
            n,
            clauses,
            witness: None,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, c) in self.clauses.iter().enumerate() {
            for l in c {
                if l.var == 0 || l.var > self.n {
                    return Err(Error::Invalid(format!(
                        "clause {} references variable {} outside 1..={}",
                        i + 1,
                        l.var,
                        self.n
                    )));
                }
            }
            if c[0].var == c[1].var {
                return Err(Error::Invalid(format!("clause {} repeats variable {}", i + 1, c[0].var)));
            }
        }
        if let Some(w) = &self.witness {
            if let Some(v) = w.keys().find(|&&v| v == 0 || v > self.n) {
                return Err(Error::Invalid(format!("position given for unknown variable {v}")));
            }
        }
        Ok(())
    }

    pub fn with_witness(mut self, w: BTreeMap<usize, (usize, usize)>) -> Result<Self> {
        self.witness = Some(w);
        self.validate()?;
        Ok(self)
    }

    pub fn satisfied(&self, x: &[bool]) -> usize {
        self.clauses.iter().filter(|c| c[0].eval(x) || c[1].eval(x)).count()
    }

    /// Best clause count over all `2^n` assignments; ties go to the
    /// assignment that is smallest read as a binary number with `x1` lowest.
    pub fn brute_force(&self) -> Result<(usize, Vec<bool>)> {
        if self.n > MAX_BRUTE_FORCE_VARS {
            return Err(Error::CapExceeded {
                what: "MAX-2SAT brute force",
                size: self.n,
                cap: MAX_BRUTE_FORCE_VARS,
                hint: "",
            });
        }
        let mut best = (0, vec![false; self.n]);
        let mut found = false;
        let mut x = vec![false; self.n];
        for mask in 0u64..(1u64 << self.n) {
            for (j, xj) in x.iter_mut().enumerate() {
                *xj = mask >> j & 1 == 1;
            }
            let s = self.satisfied(&x);
            if !found || s > best.0 {
                best = (s, x.clone());
                found = true;
            }
        }
        Ok(best)
    }

    /// `p wcnf` text with unit weights, plus `c pos` lines for the witness.
    pub fn to_wcnf(&self) -> String {
        let mut s = String::new();
        if let Some(w) = &self.witness {
            for (v, (r, c)) in w {
                writeln!(s, "c pos {v} {r} {c}").unwrap();
            }
        }
        writeln!(s, "p wcnf {} {}", self.n, self.clauses.len()).unwrap();
        for c in &self.clauses {
            writeln!(s, "1 {} {} 0", c[0].to_dimacs(), c[1].to_dimacs()).unwrap();
        }
        s
    }
}

fn parse_int(tok: Option<&str>, line: usize, what: &str) -> Result<i64> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse::<i64>()
        .map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let v = parse_int(tok, line, what)?;
    usize::try_from(v).map_err(|_| Error::parse(line, format!("negative {what}")))
}

/// Parses DIMACS `wcnf`: every clause must have weight 1 and exactly two
/// literals. Lines `c pos <var> <row> <col>` declare a grid witness.
pub fn parse_wcnf(text: &str) -> Result<Max2SatInstance> {
    let mut header: Option<(usize, usize, Option<i64>)> = None;
    let mut clauses = Vec::new();
    let mut witness: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let first = it.next().unwrap();
        if first == "c" || first.starts_with('c') {
            if first == "c" {
                let mut rest = it.clone();
                if rest.next() == Some("pos") {
                    let v = parse_usize(rest.next(), line_no, "variable")?;
                    let r = parse_usize(rest.next(), line_no, "row")?;
                    let c = parse_usize(rest.next(), line_no, "column")?;
                    if rest.next().is_some() {
                        return Err(Error::parse(line_no, "trailing tokens on position line"));
                    }
                    if witness.insert(v, (r, c)).is_some() {
                        return Err(Error::parse(line_no, format!("duplicate position for variable {v}")));
                    }
                }
            }
            continue;
        }
        if first == "p" {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate problem line"));
            }
            if it.next() != Some("wcnf") {
                return Err(Error::parse(line_no, "expected `p wcnf <vars> <clauses> [top]`"));
            }
            let n = parse_usize(it.next(), line_no, "variable count")?;
            let m = parse_usize(it.next(), line_no, "clause count")?;
            let top = match it.next() {
                Some(t) => Some(parse_int(Some(t), line_no, "top weight")?),
                None => None,
            };
            if it.next().is_some() {
                return Err(Error::parse(line_no, "trailing tokens on problem line"));
            }
            if n > 1_000_000 {
                return Err(Error::parse(line_no, "variable count too large"));
            }
            header = Some((n, m, top));
            continue;
        }
        let (n, _, top) = header.ok_or_else(|| Error::parse(line_no, "clause before problem line"))?;
        let w = parse_int(Some(first), line_no, "weight")?;
        if top == Some(w) {
            return Err(Error::parse(line_no, "hard clauses are not supported"));
        }
        if w != 1 {
            return Err(Error::parse(line_no, format!("clause weight must be 1, got {w}")));
        }
        let mut lits = Vec::new();
        loop {
            let v = parse_int(it.next(), line_no, "literal")?;
            if v == 0 {
                break;
            }
            lits.push(v);
        }
        if it.next().is_some() {
            return Err(Error::parse(line_no, "tokens after the terminating 0"));
        }
        if lits.len() != 2 {
            return Err(Error::parse(line_no, format!("expected 2 literals, got {}", lits.len())));
        }
        let l: Vec<Literal> = lits.iter().map(|&v| Literal::from_dimacs(v).unwrap()).collect();
        for x in &l {
            if x.var > n {
                return Err(Error::parse(line_no, format!("variable {} exceeds declared count {n}", x.var)));
            }
        }
        if l[0].var == l[1].var {
            return Err(Error::parse(line_no, "clause repeats a variable"));
        }
        clauses.push([l[0], l[1]]);
    }
    let (n, m, _) = header.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing problem line"))?;
    if clauses.len() != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("declared {m} clauses, found {}", clauses.len()),
        ));
    }
    let f = Max2SatInstance {
        n,
        clauses,
        witness: (!witness.is_empty()).then_some(witness),
    };
    f.validate()?;
    Ok(f)
}

fn one_minus(p: Polynomial) -> Polynomial {
    &Polynomial::constant(int(1)) - &p
}

fn x_vars(f: &Max2SatInstance, vars: &mut Vec<Variable>, cons: &mut Vec<Constraint>) {
    for j in 1..=f.n {
        vars.push(Variable {
            name: x_name(j),
            domain: Domain::Unit,
        });
        cons.push(Constraint::eq0(integrality(&x_name(j))));
    }
}

/// Two indicators per clause, each tied to one literal; all constraints
/// touch at most two variables and the two-variable ones are linear.
pub fn encode_max2sat(f: &Max2SatInstance) -> Result<POInstance> {
    f.validate()?;
    let mut vars = Vec::new();
    let mut cons = Vec::new();
    x_vars(f, &mut vars, &mut cons);
    let mut obj = BTreeMap::new();
    for (i, c) in f.clauses.iter().enumerate() {
        let [y1, y2] = y_names(i + 1);
        for (y, lit) in [(&y1, c[0]), (&y2, c[1])] {
            vars.push(Variable {
                name: y.clone(),
                domain: Domain::Binary,
            });
            cons.push(Constraint::ge0(&lit.poly() - &Polynomial::var(y)));
            obj.insert(y.clone(), int(1));
        }
        cons.push(Constraint::ge0(one_minus(&Polynomial::var(&y1) + &Polynomial::var(&y2))));
    }
    POInstance::new(vars, cons, Objective { sense: Sense::Max, coeffs: obj })
}

/// One indicator per clause bounded by the sum of both literals.
pub fn encode_max2sat_v1(f: &Max2SatInstance) -> Result<POInstance> {
    f.validate()?;
    let mut vars = Vec::new();
    let mut cons = Vec::new();
    x_vars(f, &mut vars, &mut cons);
    let mut obj = BTreeMap::new();
    for (i, c) in f.clauses.iter().enumerate() {
        let y = format!("y{}", i + 1);
        vars.push(Variable {
            name: y.clone(),
            domain: Domain::Binary,
        });
        cons.push(Constraint::ge0(&(&c[0].poly() + &c[1].poly()) - &Polynomial::var(&y)));
        obj.insert(y, int(1));
    }
    POInstance::new(vars, cons, Objective { sense: Sense::Max, coeffs: obj })
}

/// Reads the `x` part of an assignment of either encoding as booleans
/// (values at least 1/2 count as true).
pub fn decode_assignment(f: &Max2SatInstance, x: &crate::po::Assignment) -> Result<Vec<bool>> {
    let half = crate::rational::ratio(1, 2);
    (1..=f.n)
        .map(|j| {
            x.get(&x_name(j))
                .map(|v| *v >= half)
                .ok_or_else(|| Error::UnknownVariable(x_name(j)))
        })
        .collect()
}

/// Random formula whose clauses are edges of a `rows × cols` grid of
/// variables (row-major numbering); each grid edge becomes a clause with
/// probability `density`, with random signs. The grid positions are
/// attached as witness.
pub fn random_grid_max2sat(rows: usize, cols: usize, density: f64, rng: &mut impl Rng) -> Max2SatInstance {
    let id = |r: usize, c: usize| r * cols + c + 1;
    let mut clauses = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let mut nbrs = Vec::new();
            if c + 1 < cols {
                nbrs.push(id(r, c + 1));
            }
            if r + 1 < rows {
                nbrs.push(id(r + 1, c));
            }
            for b in nbrs {
                if rng.gen_bool(density) {
                    let (a, b) = if rng.gen_bool(0.5) { (id(r, c), b) } else { (b, id(r, c)) };
                    clauses.push([Literal::new(a, rng.gen_bool(0.5)), Literal::new(b, rng.gen_bool(0.5))]);
                }
            }
        }
    }
    let witness = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (id(r, c), (r, c))))
        .collect();
    Max2SatInstance {
        n: rows * cols,
        clauses,
        witness: Some(witness),
    }
}
