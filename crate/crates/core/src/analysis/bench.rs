//! Wall-clock scaling of the exact solvers and of sampling until both
//! ground states have appeared.

use std::time::Instant;

use serde::Serialize;

use super::stats::median;
use crate::error::{Error, Result};
use crate::exact::{solvers, ExactOptions, ExactSolver};
use crate::oracle::{predict_ground_pair, GroundPair, OracleSpec};
use crate::penalty::{PenaltyConfig, DEFAULT_MAGNITUDE};
use crate::qubo::{build_qubo, QuboModel};
use crate::sampler::{samplers, AnnealSchedule, Sampler, SamplerOptions};

pub const CSV_HEADER: &str = "n,solver,median_wall_time_s";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub solver: String,
    pub median_wall_time_s: f64,
}

pub fn bench_to_csv(rows: &[BenchRow], header_comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = header_comment {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n, r.solver, r.median_wall_time_s));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    /// Exact solver names, or sampler names (timed until both states appear).
    pub solvers: Vec<String>,
    pub exact: ExactOptions,
    pub schedule: AnnealSchedule,
    pub seed: u64,
    pub batch_shots: u64,
    pub max_shots: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            solvers: vec!["chain_dp".into()],
            exact: ExactOptions::default(),
            schedule: AnnealSchedule::default(),
            seed: 0,
            batch_shots: 64,
            max_shots: 100_000,
        }
    }
}

/// Samples in batches until both members of `pair` have been seen. Returns
/// the shots spent, or `None` if `max_shots` ran out first.
pub fn sample_until_both(
    sampler: &dyn Sampler,
    model: &QuboModel,
    pair: &GroundPair,
    batch: u64,
    max_shots: u64,
    seed: u64,
) -> Result<Option<u64>> {
    let batch = batch.max(1);
    let (mut seen_a, mut seen_b) = (false, false);
    let mut spent = 0;
    let mut round = 0u64;
    while spent < max_shots {
        let shots = batch.min(max_shots - spent);
        let set = sampler.sample(model, shots, seed.wrapping_add(round))?;
        seen_a |= set.count_of(&pair.state_a) > 0;
        seen_b |= set.count_of(&pair.state_b) > 0;
        spent += shots;
        round += 1;
        if seen_a && seen_b {
            return Ok(Some(spent));
        }
    }
    Ok(None)
}

enum Timed {
    Exact(Box<dyn ExactSolver>),
    Sampling(Box<dyn Sampler>),
}

fn resolve(name: &str, cfg: &BenchConfig) -> Result<(String, Timed)> {
    let exact = solvers();
    if exact.contains(name) {
        let solver = exact.get(name)?(&cfg.exact);
        return Ok((solver.name().to_string(), Timed::Exact(solver)));
    }
    let sampling = samplers();
    if sampling.contains(name) {
        let s = sampling.get(name)?(&SamplerOptions {
            schedule: cfg.schedule.clone(),
            ..SamplerOptions::default()
        })?;
        return Ok((format!("{}_until_both", s.name()), Timed::Sampling(s)));
    }
    Err(Error::UnknownStrategy {
        kind: "benchmark solver",
        name: name.to_string(),
        known: exact.names().chain(sampling.names()).collect::<Vec<_>>().join(", "),
    })
}

/// Median wall time per `(n, solver)` over `repetitions` runs on the
/// balanced-penalty model. Enumeration is skipped above its cap. Runs on a
/// single thread.
pub fn benchmark_solvers(n_list: &[usize], repetitions: usize, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if repetitions == 0 {
        return Ok(Vec::new());
    }
    let timed = cfg
        .solvers
        .iter()
        .map(|s| resolve(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    pool.install(|| {
        let mut rows = Vec::new();
        for &n in n_list {
            let spec = OracleSpec::new(n)?;
            let penalties = PenaltyConfig::balanced(&spec, DEFAULT_MAGNITUDE)?;
            let model = build_qubo(&spec, &penalties)?;
            let pair = predict_ground_pair(&spec, &penalties)?;
            for (tag, solver) in &timed {
                if let Timed::Exact(s) = solver {
                    if s.max_n().is_some_and(|max| n > max) {
                        continue;
                    }
                }
                let mut times = Vec::with_capacity(repetitions);
                for rep in 0..repetitions {
                    let start = Instant::now();
                    match solver {
                        Timed::Exact(s) => {
                            s.solve(&model, &spec)?;
                        }
                        Timed::Sampling(s) => {
                            sample_until_both(
                                s.as_ref(),
                                &model,
                                &pair,
                                cfg.batch_shots,
                                cfg.max_shots,
                                cfg.seed.wrapping_add((rep as u64) << 32),
                            )?;
                        }
                    }
                    times.push(start.elapsed().as_secs_f64());
                }
                rows.push(BenchRow {
                    n,
                    solver: tag.clone(),
                    median_wall_time_s: median(&mut times).unwrap_or(0.0),
                });
            }
        }
        Ok(rows)
    })
}
