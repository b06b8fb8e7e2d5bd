//! Exact ground-state solvers.
//!
//! Every solver implements [`ExactSolver`] and is registered by name in
//! [`solvers`]; callers pick one at runtime.

mod brute_force;
mod chain_dp;

use std::fmt;

use serde::Serialize;

pub use brute_force::{
    enumerate_spectrum, gadget_energy, verify_gadget_truth_table, BruteForce, SpectrumLevel,
    SpectrumReport, StateClass,
};
pub use chain_dp::{solve_chain_dp, ChainDp};

use crate::error::Result;
use crate::oracle::{Assignment, OracleSpec};
use crate::qubo::QuboModel;
use crate::registry::Registry;

/// Default cap on the number of variables for exhaustive enumeration (n <= 8).
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Default limit on how many ground states a solver will list.
pub const DEFAULT_MAX_GROUND_STATES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    BruteForce,
    ChainDp,
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMethod::BruteForce => "brute_force",
            SolveMethod::ChainDp => "chain_dp",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    pub enumeration_cap: usize,
    pub max_ground_states: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            max_ground_states: DEFAULT_MAX_GROUND_STATES,
        }
    }
}

/// Ground energy and the complete list of states attaining it, sorted
/// lexicographically by bits.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub ground_energy: f64,
    pub ground_states: Vec<Assignment>,
    pub degeneracy: u128,
    pub method: SolveMethod,
}

pub trait ExactSolver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Largest oracle size this solver accepts, if bounded.
    fn max_n(&self) -> Option<usize> {
        None
    }

    fn solve(&self, model: &QuboModel, spec: &OracleSpec) -> Result<ExactSolution>;
}

pub type ExactSolverCtor = fn(&ExactOptions) -> Box<dyn ExactSolver>;

pub fn solvers() -> Registry<ExactSolverCtor> {
    let mut reg: Registry<ExactSolverCtor> = Registry::new("exact solver");
    reg.register("chain_dp", |o| Box::new(ChainDp::new(o.max_ground_states)))
        .register("brute_force", |o| {
            Box::new(BruteForce::new(o.enumeration_cap, o.max_ground_states))
        })
        .alias("dp", "chain_dp")
        .alias("enumerate", "brute_force");
    reg
}

/// Builds the named solver with the given options.
pub fn solver(name: &str, options: &ExactOptions) -> Result<Box<dyn ExactSolver>> {
    Ok(solvers().get(name)?(options))
}
