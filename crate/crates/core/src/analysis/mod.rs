//! Shot statistics, penalty and size sweeps, the classical collision
//! baseline and solver benchmarks.

pub mod bench;
pub mod collision;
pub mod experiment;
pub mod fit;
pub mod shots;
pub mod stats;

pub use bench::{bench_to_csv, benchmark_solvers, sample_until_both, BenchConfig, BenchRow};
pub use collision::{classical_collision_trial, CollisionTrial};
pub use experiment::{
    derive_seed, fit_summary_json, rows_to_csv, run_penalty_experiment, run_success_sweep,
    ExperimentConfig, ExperimentRow, SweepResult,
};
pub use fit::{better_fit, fit_exponential, fit_gaussian, fit_success_curve, FitModel, FitResult};
pub use shots::{expected_shots_both, prob_both, ShotEstimate};
pub use stats::spearman;
