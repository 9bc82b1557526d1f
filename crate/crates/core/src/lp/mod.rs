//! Linear programs with exact rational data, an exact simplex solver, and
//! the extended formulations built from tree decompositions.

pub mod certificate;
pub mod ef;
pub mod program;
mod q;
pub mod simplex;
pub mod tree_solve;

pub use certificate::{check_optimality, dual_bound};
pub use ef::{
    build_ef, build_eps_ef, build_exact_binary_ef, extract_assignment, marginals, BagEntry, BagTable, EfMode, GlueRow,
    DEFAULT_EF_COLUMN_CAP,
};
pub use program::{LinearProgram, LpJson, LpVar, Row, RowJson, RowRel};
pub use simplex::{solve_lp, LPSolution, LpStatus};
pub use tree_solve::solve_ef;
