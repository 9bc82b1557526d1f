//! Independent optimality check for LP solutions.
//!
//! Given a primal point `x` and row multipliers `y`, the Lagrangian bound
//! `bᵀy + opt_{l ≤ x ≤ u} (c − Aᵀy)ᵀx` is valid whenever `y` has the right
//! sign on each inequality row. If `x` is feasible and attains that bound,
//! `x` is optimal.

use num_traits::{Signed, Zero};

use super::program::{LinearProgram, RowRel};
use crate::po::Sense;
use crate::rational::{format_rational, Rational};

/// The Lagrangian bound for multipliers `y`, or an explanation of why `y`
/// gives no finite bound.
pub fn dual_bound(lp: &LinearProgram, y: &[Rational]) -> Result<Rational, String> {
    if y.len() != lp.n_rows() {
        return Err(format!("expected {} duals, got {}", lp.n_rows(), y.len()));
    }
    let max = lp.sense() == Sense::Max;
    let mut reduced: Vec<Rational> = vec![Rational::zero(); lp.n_cols()];
    for (j, c) in lp.objective() {
        reduced[*j] += c;
    }
    let mut bound = Rational::zero();
    for (r, yi) in lp.rows().iter().zip(y) {
        let wrong_sign = match (r.rel, max) {
            (RowRel::Le, true) | (RowRel::Ge, false) => yi.is_negative(),
            (RowRel::Ge, true) | (RowRel::Le, false) => yi.is_positive(),
            (RowRel::Eq, _) => false,
        };
        if wrong_sign {
            return Err(format!("dual of row {} has the wrong sign", r.name));
        }
        bound += &r.rhs * yi;
        for (j, a) in &r.coeffs {
            reduced[*j] -= a * yi;
        }
    }
    for (v, d) in lp.vars().iter().zip(&reduced) {
        if d.is_zero() {
            continue;
        }
        // the box optimum puts x at the bound favoured by d
        let at_upper = d.is_positive() == max;
        let b = if at_upper { &v.upper } else { &v.lower };
        match b {
            Some(b) => bound += d * b,
            None => {
                return Err(format!(
                    "reduced cost {} on {} is not covered by a finite bound",
                    format_rational(d),
                    v.name
                ))
            }
        }
    }
    Ok(bound)
}

/// Verifies primal feasibility of `x`, dual feasibility of `y`, and equal
/// objective values.
pub fn check_optimality(lp: &LinearProgram, x: &[Rational], y: &[Rational]) -> Result<(), String> {
    let v = lp.violations(x);
    if !v.is_empty() {
        return Err(format!("primal point violates {}", v.join(", ")));
    }
    let bound = dual_bound(lp, y)?;
    let val = lp.objective_value(x);
    if bound != val {
        return Err(format!(
            "duality gap: primal {} vs dual {}",
            format_rational(&val),
            format_rational(&bound)
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn rejects_wrong_certificates() {
        let mut lp = LinearProgram::new(Sense::Max);
        let x = lp.add_var("x", Some(int(0)), None).unwrap();
        lp.add_row("r", vec![(x, int(1))], RowRel::Le, int(2)).unwrap();
        lp.set_objective(Sense::Max, vec![(x, int(1))]).unwrap();
        assert!(check_optimality(&lp, &[int(2)], &[int(1)]).is_ok());
        assert!(check_optimality(&lp, &[int(1)], &[int(1)]).is_err());
        assert!(check_optimality(&lp, &[int(2)], &[int(0)]).is_err());
        assert!(check_optimality(&lp, &[int(2)], &[int(-1)]).is_err());
        assert!(check_optimality(&lp, &[int(3)], &[int(1)]).is_err());
        // a larger multiplier is still a valid (loose) bound
        assert_eq!(dual_bound(&lp, &[int(2)]).unwrap(), int(4));
    }
}
