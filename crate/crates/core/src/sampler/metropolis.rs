use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_shots, shot_rng, SampleSet, Sampler};
use crate::error::{Error, Result};
use crate::oracle::Assignment;
use crate::qubo::QuboModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    Geometric,
    Linear,
}

impl std::str::FromStr for Interpolation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(Interpolation::Geometric),
            "linear" => Ok(Interpolation::Linear),
            other => Err(Error::InvalidSchedule(format!(
                "unknown interpolation '{other}' (geometric, linear)"
            ))),
        }
    }
}

/// Inverse-temperature ramp applied one value per sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnealSchedule {
    beta_start: f64,
    beta_end: f64,
    sweeps: usize,
    interpolation: Interpolation,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            beta_start: 0.1,
            beta_end: 5.0,
            sweeps: 200,
            interpolation: Interpolation::Geometric,
        }
    }
}

impl AnnealSchedule {
    pub fn new(beta_start: f64, beta_end: f64, sweeps: usize, interpolation: Interpolation) -> Result<Self> {
        if !(beta_start.is_finite() && beta_start > 0.0) {
            return Err(Error::InvalidSchedule(format!("beta_start must be positive, got {beta_start}")));
        }
        if !(beta_end.is_finite() && beta_end >= beta_start) {
            return Err(Error::InvalidSchedule(format!(
                "beta_end must be at least beta_start = {beta_start}, got {beta_end}"
            )));
        }
        if sweeps == 0 {
            return Err(Error::InvalidSchedule("sweeps must be at least 1".into()));
        }
        Ok(Self {
            beta_start,
            beta_end,
            sweeps,
            interpolation,
        })
    }

    pub fn geometric(beta_start: f64, beta_end: f64, sweeps: usize) -> Result<Self> {
        Self::new(beta_start, beta_end, sweeps, Interpolation::Geometric)
    }

    pub fn beta_start(&self) -> f64 {
        self.beta_start
    }

    pub fn beta_end(&self) -> f64 {
        self.beta_end
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// One beta per sweep, from `beta_start` to `beta_end` inclusive.
    /// A single sweep runs at `beta_end`.
    pub fn betas(&self) -> Vec<f64> {
        if self.sweeps == 1 {
            return vec![self.beta_end];
        }
        let steps = (self.sweeps - 1) as f64;
        (0..self.sweeps)
            .map(|k| {
                let t = k as f64 / steps;
                match self.interpolation {
                    Interpolation::Geometric => {
                        (self.beta_start.ln() + t * (self.beta_end.ln() - self.beta_start.ln())).exp()
                    }
                    Interpolation::Linear => self.beta_start + t * (self.beta_end - self.beta_start),
                }
            })
            .collect()
    }
}

/// Single-spin-flip Metropolis annealing from a uniformly random start.
#[derive(Debug, Clone)]
pub struct Metropolis {
    schedule: AnnealSchedule,
    bias: f64,
}

impl Metropolis {
    pub fn new(schedule: AnnealSchedule) -> Result<Self> {
        Ok(Self { schedule, bias: 0.0 })
    }

    /// Adds `bias` to every variable's linear field during the anneal only.
    /// Recorded energies are always those of the unbiased model.
    pub fn with_bias(mut self, bias: f64) -> Result<Self> {
        if !bias.is_finite() {
            return Err(Error::InvalidConfig(format!("bias must be finite, got {bias}")));
        }
        self.bias = bias;
        Ok(self)
    }

    pub fn schedule(&self) -> &AnnealSchedule {
        &self.schedule
    }
}

/// Compressed adjacency for the inner loop.
struct Couplings {
    field: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<(usize, f64)>,
}

impl Couplings {
    fn new(model: &QuboModel, bias: f64) -> Self {
        let mut offsets = Vec::with_capacity(model.num_vars() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for v in 0..model.num_vars() {
            targets.extend_from_slice(model.neighbors(v));
            offsets.push(targets.len());
        }
        Self {
            field: model.linear().iter().map(|c| c + bias).collect(),
            offsets,
            targets,
        }
    }

    fn anneal<R: Rng>(&self, betas: &[f64], rng: &mut R) -> Vec<u8> {
        let nv = self.field.len();
        let mut bits: Vec<u8> = (0..nv).map(|_| rng.gen_range(0..=1)).collect();
        for &beta in betas {
            for v in 0..nv {
                let local = self.field[v]
                    + self.targets[self.offsets[v]..self.offsets[v + 1]]
                        .iter()
                        .filter(|&&(j, _)| bits[j] == 1)
                        .map(|&(_, w)| w)
                        .sum::<f64>();
                let delta = if bits[v] == 1 { -local } else { local };
                if delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp() {
                    bits[v] ^= 1;
                }
            }
        }
        bits
    }
}

impl Sampler for Metropolis {
    fn name(&self) -> &'static str {
        "metropolis"
    }

    fn sample(&self, model: &QuboModel, shots: u64, master_seed: u64) -> Result<SampleSet> {
        check_shots(shots)?;
        let couplings = Couplings::new(model, self.bias);
        let betas = self.schedule.betas();
        let finals: Vec<Assignment> = (0..shots)
            .into_par_iter()
            .map(|k| {
                let mut rng = shot_rng(master_seed, k);
                Assignment::from(couplings.anneal(&betas, &mut rng))
            })
            .collect();
        SampleSet::from_shots(model, finals, master_seed)
    }
}
