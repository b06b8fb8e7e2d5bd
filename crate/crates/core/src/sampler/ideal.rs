use rand::Rng;
use rayon::prelude::*;

use super::{check_shots, shot_rng, SampleSet, Sampler};
use crate::error::{Error, Result};
use crate::exact::solve_chain_dp;
use crate::oracle::OracleSpec;
use crate::qubo::{Label, QuboModel};

/// A noiseless annealer: every shot returns a ground state chosen uniformly
/// from the complete ground set.
#[derive(Debug, Clone)]
pub struct GroundUniform {
    max_ground_states: usize,
}

impl GroundUniform {
    pub fn new(max_ground_states: usize) -> Self {
        Self { max_ground_states }
    }
}

fn infer_spec(model: &QuboModel) -> Result<OracleSpec> {
    let n = model
        .labels()
        .iter()
        .filter(|l| matches!(l, Label::Input(_)))
        .count();
    let spec = OracleSpec::new(n)?;
    if model.num_vars() != spec.total_vars() {
        return Err(Error::InvalidModel(format!(
            "{} variables do not form an oracle with {n} inputs",
            model.num_vars()
        )));
    }
    Ok(spec)
}

impl Sampler for GroundUniform {
    fn name(&self) -> &'static str {
        "ground_uniform"
    }

    fn sample(&self, model: &QuboModel, shots: u64, master_seed: u64) -> Result<SampleSet> {
        check_shots(shots)?;
        let spec = infer_spec(model)?;
        let ground = solve_chain_dp(model, &spec, self.max_ground_states)?.ground_states;
        let finals = (0..shots)
            .into_par_iter()
            .map(|k| ground[shot_rng(master_seed, k).gen_range(0..ground.len())].clone())
            .collect();
        SampleSet::from_shots(model, finals, master_seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::predict_ground_pair;
    use crate::penalty::PenaltyConfig;
    use crate::qubo::build_qubo;
    use crate::sampler::success_stats;

    #[test]
    fn splits_evenly_between_pair() {
        let spec = OracleSpec::new(20).unwrap();
        let p = PenaltyConfig::random(&spec, 2.0, 5).unwrap();
        let m = build_qubo(&spec, &p).unwrap();
        let set = GroundUniform::new(16).sample(&m, 4000, 1).unwrap();
        assert_eq!(set.records.len(), 2);
        let s = success_stats(&set, &predict_ground_pair(&spec, &p).unwrap()).unwrap();
        assert_eq!(s.ground_fraction, 1.0);
        assert!((s.p_z - 0.5).abs() < 0.05);
    }
}
