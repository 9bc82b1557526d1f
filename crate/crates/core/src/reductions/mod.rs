//! MAX-2SAT encodings, lifting along minor operations, rounding, and the
//! end-to-end pipeline.

pub mod lift;
pub mod max2sat;
pub mod pipeline;
pub mod round;
pub mod twosat;

pub use lift::{integral_objective, lift_instance, pullback_solution, LiftedInstance, LiftedJson};
pub use max2sat::{
    decode_assignment, encode_max2sat, encode_max2sat_v1, parse_wcnf, random_grid_max2sat, Literal, Max2SatInstance,
};
pub use pipeline::{grid_dims, pipeline, random_supergraph, witness_model, PipelineOptions, PipelineResult, Stage, Trace};
pub use round::round_solution;
pub use twosat::{encode_2sat_set, parse_cnf, TwoSatFormula};
