//! The analytic benchmark, experiment drivers and reporting.

pub mod benchmark;
pub mod config;
pub mod experiments;
pub mod fe;
pub mod manufactured;
pub mod report;
pub mod setup;

pub use benchmark::{exact_gradient, exact_solution, source_term};
pub use config::{ExperimentConfig, Geometry, Mode};
pub use experiments::{run, run_fe_baseline, run_gmres_study, run_pstddm, ExperimentReport, Problem};
pub use fe::{global_load, global_subproblem, solve_fe};
pub use report::{read_records, write_outputs, write_records, ExperimentRecord};
pub use setup::benchmark_grid;
