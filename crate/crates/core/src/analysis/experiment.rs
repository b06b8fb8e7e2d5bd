//! Penalty-scheme comparisons and success-rate sweeps over problem size.

use std::time::Instant;

use rand::RngCore;
use serde::Serialize;

use super::fit::{fit_success_curve, FitResult};
use crate::error::{Error, Result};
use crate::oracle::{predict_ground_pair, OracleSpec};
use crate::penalty::{PenaltyConfig, SchemeTag, DEFAULT_MAGNITUDE};
use crate::qubo::build_qubo;
use crate::sampler::{sampler, shot_rng, success_stats, AnnealSchedule, SamplerOptions};

pub const CSV_HEADER: &str = "n,scheme,p_z,p_zp,both_seen,shots,wall_time_s";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub scheme: SchemeTag,
    pub p_z: f64,
    pub p_zp: f64,
    pub both_seen: bool,
    pub shots: u64,
    pub wall_time_s: f64,
    /// Sampling runs made, including the successful one.
    pub attempts: u32,
}

impl ExperimentRow {
    pub fn ground_fraction(&self) -> f64 {
        self.p_z + self.p_zp
    }

    fn csv_line(&self, timing: bool) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.scheme,
            self.p_z,
            self.p_zp,
            self.both_seen,
            self.shots,
            if timing { self.wall_time_s } else { 0.0 }
        )
    }
}

/// CSV with the fixed experiment header. With `timing` off the wall-time
/// column is written as 0 so the file is reproducible byte for byte.
pub fn rows_to_csv(rows: &[ExperimentRow], header_comment: Option<&str>, timing: bool) -> String {
    let mut out = String::new();
    if let Some(c) = header_comment {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line(timing));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub shots: u64,
    pub schedule: AnnealSchedule,
    pub seed: u64,
    pub magnitude: f64,
    /// Sampling runs allowed per row; a row stops early once both states are seen.
    pub retries: u32,
    pub sampler: String,
    pub bias: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            shots: 4000,
            schedule: AnnealSchedule::default(),
            seed: 0,
            magnitude: DEFAULT_MAGNITUDE,
            retries: 1,
            sampler: "metropolis".into(),
            bias: None,
        }
    }
}

/// Independent 64-bit seed for a labelled sub-task of a seeded run.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    shot_rng(master, stream).next_u64()
}

fn stream_id(n: usize, scheme: SchemeTag, attempt: u32) -> u64 {
    ((n as u64) << 24) | ((scheme as u64) << 16) | u64::from(attempt)
}

fn run_row(n: usize, scheme: SchemeTag, cfg: &ExperimentConfig) -> Result<ExperimentRow> {
    let spec = OracleSpec::new(n)?;
    let sampler = sampler(
        &cfg.sampler,
        &SamplerOptions {
            schedule: cfg.schedule.clone(),
            bias: cfg.bias,
            ..SamplerOptions::default()
        },
    )?;
    let start = Instant::now();
    let mut attempt = 0;
    loop {
        let stream = stream_id(n, scheme, attempt);
        let penalties = PenaltyConfig::from_scheme(
            &spec,
            scheme.as_str(),
            cfg.magnitude,
            derive_seed(cfg.seed, stream),
        )?;
        let model = build_qubo(&spec, &penalties)?;
        let pair = predict_ground_pair(&spec, &penalties)?;
        let set = sampler.sample(&model, cfg.shots, derive_seed(cfg.seed ^ 0x5eed, stream))?;
        let stats = success_stats(&set, &pair)?;
        attempt += 1;
        if stats.both_seen || attempt >= cfg.retries {
            return Ok(ExperimentRow {
                n,
                scheme,
                p_z: stats.p_z,
                p_zp: stats.p_zp,
                both_seen: stats.both_seen,
                shots: cfg.shots,
                wall_time_s: start.elapsed().as_secs_f64(),
                attempts: attempt,
            });
        }
    }
}

fn check_config(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.shots == 0 {
        return Err(Error::InvalidConfig("shots must be at least 1".into()));
    }
    if cfg.retries == 0 {
        return Err(Error::InvalidConfig("retries must be at least 1".into()));
    }
    Ok(())
}

/// One row per `(n, scheme)`, ordered by `n` and then by scheme name.
pub fn run_penalty_experiment(
    n_list: &[usize],
    schemes: &[SchemeTag],
    cfg: &ExperimentConfig,
) -> Result<Vec<ExperimentRow>> {
    check_config(cfg)?;
    if let Some(bad) = schemes
        .iter()
        .find(|s| !matches!(s, SchemeTag::Balanced | SchemeTag::Random | SchemeTag::Uniform))
    {
        return Err(Error::InvalidConfig(format!(
            "scheme '{bad}' is not one of balanced, random, uniform"
        )));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut schemes = schemes.to_vec();
    schemes.sort_by_key(|s| s.as_str());
    schemes.dedup();

    let mut rows = Vec::with_capacity(ns.len() * schemes.len());
    for &n in &ns {
        for &scheme in &schemes {
            rows.push(run_row(n, scheme, cfg)?);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<ExperimentRow>,
    pub exponential: FitResult,
    pub gaussian: FitResult,
}

/// Balanced-penalty success rate (ground fraction) against `n`, with both fits.
pub fn run_success_sweep(n_list: &[usize], cfg: &ExperimentConfig) -> Result<SweepResult> {
    let mut distinct = n_list.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "a sweep needs at least 3 sizes, got {}",
            distinct.len()
        )));
    }
    let cfg = ExperimentConfig {
        retries: 1,
        ..cfg.clone()
    };
    let rows = run_penalty_experiment(&distinct, &[SchemeTag::Balanced], &cfg)?;
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.ground_fraction())).collect();
    let (exponential, gaussian) = fit_success_curve(&points)?;
    Ok(SweepResult {
        rows,
        exponential,
        gaussian,
    })
}

/// Fit summary as written next to a sweep's CSV.
pub fn fit_summary_json(sweep: &SweepResult, meta: Option<serde_json::Value>) -> Result<String> {
    #[derive(Serialize)]
    struct Params {
        amplitude: f64,
        shape: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        width: Option<f64>,
    }
    #[derive(Serialize)]
    struct Entry {
        model: String,
        params: Params,
        r_squared: f64,
        points_used: usize,
        excluded_n: Vec<f64>,
    }
    #[derive(Serialize)]
    struct Summary {
        #[serde(skip_serializing_if = "Option::is_none")]
        meta: Option<serde_json::Value>,
        fits: Vec<Entry>,
        preferred: String,
    }
    let entry = |f: &FitResult| Entry {
        model: f.model.to_string(),
        params: Params {
            amplitude: f.amplitude,
            shape: f.shape,
            width: f.gaussian_width(),
        },
        r_squared: f.r_squared,
        points_used: f.points_used,
        excluded_n: f.excluded.clone(),
    };
    let summary = Summary {
        meta,
        fits: vec![entry(&sweep.exponential), entry(&sweep.gaussian)],
        preferred: super::fit::better_fit(&sweep.exponential, &sweep.gaussian)
            .model
            .to_string(),
    };
    Ok(serde_json::to_string_pretty(&summary)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ExperimentConfig {
        ExperimentConfig {
            shots: 100,
            schedule: AnnealSchedule::geometric(0.1, 5.0, 100).unwrap(),
            seed: 3,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn empty_n_list() {
        let rows = run_penalty_experiment(&[], &[SchemeTag::Balanced], &quick()).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn small_balanced_sees_both() {
        let rows = run_penalty_experiment(&[3], &[SchemeTag::Balanced], &quick()).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].both_seen);
        assert_eq!(rows[0].attempts, 1);
    }

    #[test]
    fn canonical_order_and_determinism() {
        let cfg = ExperimentConfig {
            shots: 50,
            schedule: AnnealSchedule::geometric(0.1, 5.0, 20).unwrap(),
            ..quick()
        };
        let schemes = [SchemeTag::Uniform, SchemeTag::Random, SchemeTag::Balanced];
        let rows = run_penalty_experiment(&[6, 4], &schemes, &cfg).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.n, r.scheme.as_str())).collect();
        assert_eq!(
            keys,
            [(4, "balanced"), (4, "random"), (4, "uniform"), (6, "balanced"), (6, "random"), (6, "uniform")]
        );
        let again = run_penalty_experiment(&[4, 6], &schemes, &cfg).unwrap();
        assert_eq!(rows_to_csv(&rows, None, false), rows_to_csv(&again, None, false));
        for r in &rows {
            assert!((0.0..=1.0).contains(&r.p_z) && (0.0..=1.0).contains(&r.p_zp));
        }
    }

    #[test]
    fn retries_stop_on_success() {
        let cfg = ExperimentConfig {
            shots: 4,
            retries: 50,
            schedule: AnnealSchedule::geometric(0.1, 5.0, 50).unwrap(),
            ..quick()
        };
        let rows = run_penalty_experiment(&[3], &[SchemeTag::Random], &cfg).unwrap();
        assert!(rows[0].both_seen);
        assert!(rows[0].attempts >= 1 && rows[0].attempts <= 50);
    }

    #[test]
    fn rejects_bad_schemes_and_config() {
        assert!(run_penalty_experiment(&[3], &[SchemeTag::Zero], &quick()).is_err());
        let cfg = ExperimentConfig { shots: 0, ..quick() };
        assert!(run_penalty_experiment(&[3], &[SchemeTag::Balanced], &cfg).is_err());
        assert!(run_success_sweep(&[3, 4], &quick()).is_err());
    }

    #[test]
    fn csv_header_and_timing_switch() {
        let row = ExperimentRow {
            n: 5,
            scheme: SchemeTag::Balanced,
            p_z: 0.5,
            p_zp: 0.25,
            both_seen: true,
            shots: 4000,
            wall_time_s: 1.5,
            attempts: 1,
        };
        let csv = rows_to_csv(std::slice::from_ref(&row), Some("meta"), false);
        assert_eq!(csv, "# meta\nn,scheme,p_z,p_zp,both_seen,shots,wall_time_s\n5,balanced,0.5,0.25,true,4000,0\n");
        assert!(rows_to_csv(&[row], None, true).ends_with(",1.5\n"));
    }
}
