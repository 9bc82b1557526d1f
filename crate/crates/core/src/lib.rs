pub mod error;
pub mod graph;
pub mod lp;
pub mod po;
pub mod polytope;
pub mod rational;
pub mod reductions;

pub use error::{Error, Result};
