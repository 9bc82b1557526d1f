//! Rounding ε-feasible points of lifted instances to exact solutions.

use num_traits::Signed;

use super::lift::LiftedInstance;
use crate::error::{Error, Result};
use crate::po::Assignment;
use crate::rational::{format_rational, ratio, round_nearest, Rational};

/// Rounds every coordinate of an ε-feasible point (`ε < 1/10`) to the
/// nearest integer and checks that the result is exactly feasible.
pub fn round_solution(l: &LiftedInstance, z: &Assignment, eps: &Rational) -> Result<Assignment> {
    if eps.is_negative() {
        return Err(Error::Invalid("epsilon must be nonnegative".into()));
    }
    if *eps >= ratio(1, 10) {
        return Err(Error::Precondition(format!(
            "rounding needs epsilon < 1/10, got {}",
            format_rational(eps)
        )));
    }
    l.instance.check_domains(z)?;
    let report = l.instance.eps_feasible(z, eps)?;
    if !report.feasible {
        return Err(Error::Precondition(format!(
            "point is not {}-feasible (largest violation {})",
            format_rational(eps),
            format_rational(&report.max_violation(&l.instance))
        )));
    }
    let rounded: Assignment = z.iter().map(|(k, v)| (k.clone(), round_nearest(v))).collect();
    let exact = l.instance.eps_feasible(&rounded, &Rational::from_integer(0.into()))?;
    if let Some(bad) = exact.slacks.iter().find(|s| !s.ok) {
        return Err(Error::Infeasible(format!(
            "rounded point violates constraint {} (value {})",
            bad.index,
            format_rational(&bad.value)
        )));
    }
    Ok(rounded)
}
