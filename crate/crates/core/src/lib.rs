//! Adiabatic (QUBO) formulation of Simon's period-finding problem for the
//! all-ones hidden period.
//!
//! The crate builds the penalized XOR-chain QUBO, solves it exactly (by
//! exhaustive enumeration for small sizes and by a chain dynamic program for
//! any size), samples it with a simulated annealer, and provides the shot and
//! success-rate arithmetic used to analyze such runs.
//!
//! Solvers, samplers and penalty schemes are interchangeable strategies,
//! each registered by name: see [`exact::solvers`], [`sampler::samplers`]
//! and [`penalty::schemes`].

pub mod analysis;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod penalty;
pub mod qubo;
pub mod registry;
pub mod sampler;

pub use error::{Error, Result};
pub use oracle::{is_oracle_valid, predict_ground_pair, recover_period, Assignment, GroundPair, OracleSpec};
pub use penalty::{validate_penalties, PenaltyConfig, PenaltyWarning, SchemeTag};
pub use qubo::{build_qubo, energy, Label, QuboDocument, QuboModel};
