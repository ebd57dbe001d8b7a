pub mod analysis;
pub mod chebyshev;
pub mod dual;
pub mod error;
pub mod graph;
pub mod hop;
pub mod hull;
pub mod hyperplane;
pub mod linalg;
pub mod num;
pub mod objectives;
pub mod policy;
pub mod polytope;
pub mod repository;
pub mod sample;
pub mod shapes;
pub mod vset;

pub use error::{Error, Result};

/// Upper bound on vertex counts; vertex sets are 128-bit masks.
pub const MAX_VERTICES: usize = 128;
