//! Shot-based samplers standing in for an annealer.
//!
//! Every shot draws from its own random stream, derived from the master
//! seed and the shot index, so a [`SampleSet`] depends only on the inputs and
//! never on how shots are scheduled across threads.

mod ideal;
mod metropolis;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use ideal::GroundUniform;
pub use metropolis::{AnnealSchedule, Interpolation, Metropolis};

use crate::error::{Error, Result};
use crate::oracle::{Assignment, GroundPair};
use crate::qubo::QuboModel;
use crate::registry::Registry;

/// Random stream for shot `k`: ChaCha keyed by the master seed, stream id `k`.
pub fn shot_rng(master_seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(shot);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    #[serde(serialize_with = "ser_bits")]
    pub assignment: Assignment,
    pub energy: f64,
    pub count: u64,
}

fn ser_bits<S: serde::Serializer>(a: &Assignment, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(a)
}

/// Distinct final states with their energies and shot counts, sorted by
/// energy and then by bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    pub shots: u64,
    pub master_seed: u64,
    pub records: Vec<SampleRecord>,
}

impl SampleSet {
    /// Aggregates per-shot final states.
    pub fn from_shots(model: &QuboModel, finals: Vec<Assignment>, master_seed: u64) -> Result<Self> {
        let shots = finals.len() as u64;
        let mut counts: BTreeMap<Assignment, u64> = BTreeMap::new();
        for a in finals {
            *counts.entry(a).or_insert(0) += 1;
        }
        let mut records = counts
            .into_iter()
            .map(|(assignment, count)| {
                Ok(SampleRecord {
                    energy: model.energy(&assignment)?,
                    assignment,
                    count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        records.sort_by(|a, b| {
            a.energy
                .total_cmp(&b.energy)
                .then_with(|| a.assignment.cmp(&b.assignment))
        });
        Ok(Self {
            shots,
            master_seed,
            records,
        })
    }

    pub fn count_of(&self, assignment: &Assignment) -> u64 {
        self.records
            .iter()
            .find(|r| &r.assignment == assignment)
            .map_or(0, |r| r.count)
    }

    pub fn lowest_energy(&self) -> Option<f64> {
        self.records.first().map(|r| r.energy)
    }

    pub fn to_csv(&self, header_comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = header_comment {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str("bitstring,energy,count\n");
        for r in &self.records {
            out.push_str(&format!("{},{},{}\n", r.assignment, r.energy, r.count));
        }
        out
    }

    pub fn to_json(&self, meta: Option<serde_json::Value>) -> Result<String> {
        #[derive(Serialize)]
        struct Doc<'a> {
            #[serde(skip_serializing_if = "Option::is_none")]
            meta: Option<serde_json::Value>,
            #[serde(flatten)]
            set: &'a SampleSet,
        }
        Ok(serde_json::to_string_pretty(&Doc { meta, set: self })?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessStats {
    pub p_z: f64,
    pub p_zp: f64,
    pub both_seen: bool,
    pub ground_fraction: f64,
}

/// Empirical frequencies of the two ground-pair members in a sample set.
pub fn success_stats(samples: &SampleSet, pair: &GroundPair) -> Result<SuccessStats> {
    let len = pair.state_a.len();
    if let Some(r) = samples.records.iter().find(|r| r.assignment.len() != len) {
        return Err(Error::LengthMismatch {
            expected: len,
            got: r.assignment.len(),
        });
    }
    if samples.shots == 0 {
        return Err(Error::InvalidConfig("sample set has no shots".into()));
    }
    let ca = samples.count_of(&pair.state_a);
    let cb = samples.count_of(&pair.state_b);
    let shots = samples.shots as f64;
    let (p_z, p_zp) = (ca as f64 / shots, cb as f64 / shots);
    Ok(SuccessStats {
        p_z,
        p_zp,
        both_seen: ca > 0 && cb > 0,
        ground_fraction: p_z + p_zp,
    })
}

pub trait Sampler: Send + Sync {
    fn name(&self) -> &'static str;

    fn sample(&self, model: &QuboModel, shots: u64, master_seed: u64) -> Result<SampleSet>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerOptions {
    pub schedule: AnnealSchedule,
    /// Extra linear field on every variable; positive values favor zeros.
    pub bias: Option<f64>,
    pub max_ground_states: usize,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self {
            schedule: AnnealSchedule::default(),
            bias: None,
            max_ground_states: crate::exact::DEFAULT_MAX_GROUND_STATES,
        }
    }
}

pub type SamplerCtor = fn(&SamplerOptions) -> Result<Box<dyn Sampler>>;

pub fn samplers() -> Registry<SamplerCtor> {
    let mut reg: Registry<SamplerCtor> = Registry::new("sampler");
    reg.register("metropolis", |o| {
        let mut m = Metropolis::new(o.schedule.clone())?;
        if let Some(b) = o.bias {
            m = m.with_bias(b)?;
        }
        Ok(Box::new(m))
    })
    .register("ground_uniform", |o| Ok(Box::new(GroundUniform::new(o.max_ground_states))))
    .alias("sa", "metropolis")
    .alias("ideal", "ground_uniform");
    reg
}

pub fn sampler(name: &str, options: &SamplerOptions) -> Result<Box<dyn Sampler>> {
    samplers().get(name)?(options)
}

pub(crate) fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::InvalidConfig("shots must be at least 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{predict_ground_pair, OracleSpec};
    use crate::penalty::PenaltyConfig;
    use crate::qubo::build_qubo;

    fn worked_example() -> (QuboModel, GroundPair) {
        let spec = OracleSpec::new(3).unwrap();
        let p = PenaltyConfig::balanced(&spec, 2.0).unwrap();
        (build_qubo(&spec, &p).unwrap(), predict_ground_pair(&spec, &p).unwrap())
    }

    #[test]
    fn stats_even_split() {
        let (m, pair) = worked_example();
        let mut finals = vec![pair.state_a.clone(); 500];
        finals.extend(vec![pair.state_b.clone(); 500]);
        let set = SampleSet::from_shots(&m, finals, 0).unwrap();
        let s = success_stats(&set, &pair).unwrap();
        assert_eq!((s.p_z, s.p_zp, s.both_seen, s.ground_fraction), (0.5, 0.5, true, 1.0));
    }

    #[test]
    fn stats_missing_partner() {
        let (m, pair) = worked_example();
        let mut finals = vec![pair.state_a.clone(); 3];
        finals.push(Assignment::zeros(7));
        let set = SampleSet::from_shots(&m, finals, 0).unwrap();
        let s = success_stats(&set, &pair).unwrap();
        assert!(!s.both_seen);
        assert_eq!(s.p_z, 0.75);
        assert_eq!(s.p_zp, 0.0);
    }

    #[test]
    fn stats_dimension_mismatch() {
        let (_, pair) = worked_example();
        let spec = OracleSpec::new(4).unwrap();
        let m4 = build_qubo(&spec, &PenaltyConfig::zero(&spec)).unwrap();
        let set = SampleSet::from_shots(&m4, vec![Assignment::zeros(10)], 0).unwrap();
        assert!(matches!(success_stats(&set, &pair), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn records_sorted_and_exports() {
        let (m, pair) = worked_example();
        let finals = vec![Assignment::zeros(7), pair.state_b.clone(), pair.state_a.clone(), pair.state_b.clone()];
        let set = SampleSet::from_shots(&m, finals, 5).unwrap();
        assert_eq!(set.records.len(), 3);
        assert_eq!(set.lowest_energy(), Some(-2.0));
        let csv = set.to_csv(None);
        assert_eq!(csv, "bitstring,energy,count\n0010100,-2,1\n1100110,-2,2\n0000000,0,1\n");
        let json: serde_json::Value = serde_json::from_str(&set.to_json(None).unwrap()).unwrap();
        assert_eq!(json["shots"], 4);
        assert_eq!(json["records"][1]["assignment"], "1100110");
    }

    #[test]
    fn registry_names() {
        let names: Vec<_> = samplers().names().collect();
        assert_eq!(names, ["ground_uniform", "metropolis"]);
        assert!(sampler("sa", &SamplerOptions::default()).is_ok());
        assert!(sampler("qpu", &SamplerOptions::default()).is_err());
    }
}
