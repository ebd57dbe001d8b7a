//! Orchestration around the hop search: run configuration, random seeding,
//! the shared-repository agent pool, and reports.

pub mod config;
pub mod error;
pub mod plot;
pub mod report;
pub mod run;
pub mod seed;
pub mod verify;

pub use config::{OutputConfig, RunConfig};
pub use error::{HopperError, Result};
pub use report::{RunReport, TrajectoryPoint};
pub use run::{run_scenario, run_scenario_with, Progress, RunOutcome};
pub use seed::random_seed_polytope;
pub use verify::{analyze_pca_file, best_of_snapshot, verify_file};
