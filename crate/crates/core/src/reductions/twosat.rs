//! 2-SAT formulas as 0/1 feasible sets.

use serde::{Deserialize, Serialize};

use super::max2sat::{x_name, Literal};
use crate::error::{Error, Result};
use crate::po::{Constraint, Domain, Objective, POInstance, Polynomial, Variable};
use crate::rational::int;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSatFormula {
    pub n: usize,
    /// Clauses with one or two literals.
    pub clauses: Vec<Vec<Literal>>,
}

impl TwoSatFormula {
    pub fn new(n: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() || c.len() > 2 {
                return Err(Error::Invalid(format!("clause {} has {} literals", i + 1, c.len())));
            }
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > n) {
                return Err(Error::Invalid(format!("clause {} references variable {}", i + 1, l.var)));
            }
        }
        Ok(Self { n, clauses })
    }

    pub fn satisfies(&self, x: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(x)))
    }
}

/// Parses DIMACS `cnf` with clauses of one or two literals. A clause may span
/// lines and ends at `0`.
pub fn parse_cnf(text: &str) -> Result<TwoSatFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<Literal> = Vec::new();
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate problem line"));
            }
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 4 || t[0] != "p" || t[1] != "cnf" {
                return Err(Error::parse(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let n = t[2].parse::<usize>().map_err(|_| Error::parse(line_no, "bad variable count"))?;
            let m = t[3].parse::<usize>().map_err(|_| Error::parse(line_no, "bad clause count"))?;
            if n > 1_000_000 {
                return Err(Error::parse(line_no, "variable count too large"));
            }
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or_else(|| Error::parse(line_no, "clause before problem line"))?;
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal `{tok}`")))?;
            match Literal::from_dimacs(v) {
                None => {
                    if cur.is_empty() {
                        return Err(Error::parse(line_no, "empty clause"));
                    }
                    clauses.push(std::mem::take(&mut cur));
                }
                Some(l) => {
                    if l.var > n {
                        return Err(Error::parse(line_no, format!("variable {} exceeds declared count {n}", l.var)));
                    }
                    cur.push(l);
                    if cur.len() > 2 {
                        return Err(Error::parse(line_no, "clause has more than two literals"));
                    }
                }
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(last_line, "missing problem line"))?;
    if !cur.is_empty() {
        return Err(Error::parse(last_line, "unterminated clause"));
    }
    if clauses.len() != m {
        return Err(Error::parse(last_line, format!("declared {m} clauses, found {}", clauses.len())));
    }
    TwoSatFormula::new(n, clauses)
}

/// Binary variables `x1..xn` and one linear row `Σ literal ≥ 1` per clause;
/// the objective is empty.
pub fn encode_2sat_set(f: &TwoSatFormula) -> Result<POInstance> {
    let vars = (1..=f.n)
        .map(|j| Variable {
            name: x_name(j),
            domain: Domain::Binary,
        })
        .collect();
    let cons = f
        .clauses
        .iter()
        .map(|c| {
            let sum = c.iter().fold(Polynomial::zero(), |acc, l| &acc + &l.poly());
            Constraint::ge0(&sum - &Polynomial::constant(int(1)))
        })
        .collect();
    POInstance::new(vars, cons, Objective::none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::po::enumerate_feasible;
    use rand::{Rng, SeedableRng};

    fn feasible_bits(inst: &POInstance) -> Vec<Vec<bool>> {
        let mut v: Vec<Vec<bool>> = enumerate_feasible(inst, &int(1), 1 << 16)
            .unwrap()
            .iter()
            .map(|a| (1..=inst.n()).map(|j| a[&x_name(j)] == int(1)).collect())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn examples() {
        let f = parse_cnf("p cnf 2 1\n1 2 0\n").unwrap();
        assert_eq!(
            feasible_bits(&encode_2sat_set(&f).unwrap()),
            vec![vec![false, true], vec![true, false], vec![true, true]]
        );
        let g = parse_cnf("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert!(feasible_bits(&encode_2sat_set(&g).unwrap()).is_empty());
        for bad in ["1 2 0\n", "p cnf 3 1\n1 2 3 0\n", "p cnf 2 1\n1 2\n", "p cnf 2 1\n0\n", "p cnf 2 2\n1 0\n"] {
            assert_eq!(parse_cnf(bad).unwrap_err().kind(), "parse", "{bad:?}");
        }
    }

    #[test]
    fn random_formulas_match_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.gen_range(1..7);
            let clauses = (0..rng.gen_range(0..8))
                .map(|_| {
                    (0..rng.gen_range(1..3))
                        .map(|_| Literal::new(rng.gen_range(1..=n), rng.gen_bool(0.5)))
                        .collect()
                })
                .collect();
            let f = TwoSatFormula::new(n, clauses).unwrap();
            let mut want = Vec::new();
            for mask in 0..1u32 << n {
                let x: Vec<bool> = (0..n).map(|j| mask >> j & 1 == 1).collect();
                if f.satisfies(&x) {
                    want.push(x);
                }
            }
            want.sort();
            assert_eq!(feasible_bits(&encode_2sat_set(&f).unwrap()), want);
        }
    }
}
