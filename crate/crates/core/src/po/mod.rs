//! Polynomial optimization instances over binary and unit-interval
//! variables, with exact evaluation, ε-feasibility and brute-force oracles.

pub(crate) mod compiled;
mod instance;
pub mod oracle;
mod polynomial;

pub use instance::{
    integrality, Assignment, Constraint, ConstraintJson, ConstraintSlack, Domain, EpsReport,
    InstanceBuilder, InstanceJson, MonomialJson, Objective, POInstance, Relation, Sense, Variable,
};
pub use oracle::{brute_force_optimum, enumerate_feasible, BruteForceResult, DEFAULT_BRUTE_FORCE_CAP};
pub use polynomial::{Monomial, Polynomial};
