use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{ExactSolution, ExactSolver, SolveMethod};
use crate::error::{Error, Result};
use crate::oracle::{bitstring, Assignment, OracleSpec};
use crate::qubo::{QuboModel, ENERGY_TOLERANCE};

/// States per work unit; each unit is walked in Gray-code order.
const CHUNK_BITS: usize = 16;

/// Hard ceiling imposed by the 64-bit state encoding.
const MASK_BITS: usize = 63;

/// Visits every state whose high bits equal `prefix`, flipping one low bit
/// per step and updating the energy incrementally.
fn walk_chunk(model: &QuboModel, prefix: u64, low_bits: usize, mut visit: impl FnMut(u64, f64)) {
    let linear = model.linear();
    let mut mask = prefix;
    let mut e = model.energy_of_mask(mask);
    visit(mask, e);
    for t in 1u64..(1u64 << low_bits) {
        let k = t.trailing_zeros() as usize;
        let field = linear[k]
            + model
                .neighbors(k)
                .iter()
                .filter(|&&(j, _)| (mask >> j) & 1 == 1)
                .map(|&(_, w)| w)
                .sum::<f64>();
        if (mask >> k) & 1 == 1 {
            e -= field;
        } else {
            e += field;
        }
        mask ^= 1 << k;
        visit(mask, e);
    }
}

fn check_cap(model: &QuboModel, spec: &OracleSpec, cap: usize) -> Result<usize> {
    let nv = model.num_vars();
    if nv != spec.total_vars() {
        return Err(Error::LengthMismatch {
            expected: spec.total_vars(),
            got: nv,
        });
    }
    if nv > cap.min(MASK_BITS) {
        return Err(Error::SizeCapExceeded {
            vars: nv,
            cap: cap.min(MASK_BITS),
        });
    }
    Ok(nv)
}

fn mask_is_valid(spec: &OracleSpec, mask: u64) -> bool {
    let bit = |k: usize| (mask >> k) & 1;
    (0..spec.gadgets()).all(|i| {
        let (xl, xr) = (bit(spec.input_index(i)), bit(spec.input_index(i + 1)));
        bit(spec.output_index(i)) == xl ^ xr && bit(spec.ancilla_index(i)) == xl & xr
    })
}

fn mask_output(spec: &OracleSpec, mask: u64) -> Vec<u8> {
    (0..spec.gadgets())
        .map(|i| ((mask >> spec.output_index(i)) & 1) as u8)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateClass {
    pub valid_oracle: bool,
    pub output_value: Vec<u8>,
}

/// One energy level: its energy and every state on it, in increasing mask order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLevel {
    pub energy: f64,
    pub states: Vec<u64>,
}

/// The full energy spectrum of a model, grouped into levels of equal energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    spec: OracleSpec,
    levels: Vec<SpectrumLevel>,
}

impl SpectrumReport {
    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }

    pub fn levels(&self) -> &[SpectrumLevel] {
        &self.levels
    }

    pub fn ground(&self) -> &SpectrumLevel {
        &self.levels[0]
    }

    pub fn total_states(&self) -> usize {
        self.levels.iter().map(|l| l.states.len()).sum()
    }

    pub fn assignment(&self, mask: u64) -> Assignment {
        Assignment::from_mask(mask, self.spec.total_vars())
    }

    pub fn classify(&self, mask: u64) -> StateClass {
        StateClass {
            valid_oracle: mask_is_valid(&self.spec, mask),
            output_value: mask_output(&self.spec, mask),
        }
    }

    pub fn valid_count(&self, level: &SpectrumLevel) -> usize {
        level
            .states
            .iter()
            .filter(|&&m| mask_is_valid(&self.spec, m))
            .count()
    }

    /// Oracle-valid states on a level grouped by their output register.
    pub fn valid_by_output(&self, level: &SpectrumLevel) -> BTreeMap<Vec<u8>, Vec<u64>> {
        let mut groups: BTreeMap<Vec<u8>, Vec<u64>> = BTreeMap::new();
        for &m in level.states.iter().filter(|&&m| mask_is_valid(&self.spec, m)) {
            groups.entry(mask_output(&self.spec, m)).or_default().push(m);
        }
        groups
    }

    /// Rows of `energy,count,valid_count`, lowest energy first.
    pub fn to_csv(&self, header_comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = header_comment {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str("energy,count,valid_count\n");
        for level in &self.levels {
            out.push_str(&format!(
                "{},{},{}\n",
                level.energy,
                level.states.len(),
                self.valid_count(level)
            ));
        }
        out
    }

    /// JSON report; `include_states` lists every state of every level.
    pub fn to_json(&self, include_states: bool, meta: Option<serde_json::Value>) -> Result<String> {
        #[derive(Serialize)]
        struct StateJson {
            bits: String,
            valid: bool,
            output: String,
        }
        #[derive(Serialize)]
        struct LevelJson {
            energy: f64,
            count: usize,
            valid_count: usize,
            valid_by_output: BTreeMap<String, Vec<String>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            states: Option<Vec<StateJson>>,
        }
        #[derive(Serialize)]
        struct ReportJson {
            #[serde(skip_serializing_if = "Option::is_none")]
            meta: Option<serde_json::Value>,
            n: usize,
            total_vars: usize,
            total_states: usize,
            levels: Vec<LevelJson>,
        }
        let nv = self.spec.total_vars();
        let bits = |m: u64| Assignment::from_mask(m, nv).to_string();
        let levels = self
            .levels
            .iter()
            .map(|level| LevelJson {
                energy: level.energy,
                count: level.states.len(),
                valid_count: self.valid_count(level),
                valid_by_output: self
                    .valid_by_output(level)
                    .into_iter()
                    .map(|(o, ms)| (bitstring(&o), ms.into_iter().map(bits).collect()))
                    .collect(),
                states: include_states.then(|| {
                    level
                        .states
                        .iter()
                        .map(|&m| {
                            let class = self.classify(m);
                            StateJson {
                                bits: bits(m),
                                valid: class.valid_oracle,
                                output: bitstring(&class.output_value),
                            }
                        })
                        .collect()
                }),
            })
            .collect();
        let report = ReportJson {
            meta,
            n: self.spec.n(),
            total_vars: nv,
            total_states: self.total_states(),
            levels,
        };
        Ok(serde_json::to_string_pretty(&report)?)
    }
}

/// Exhaustively evaluates all `2^(3n-2)` states and groups them by energy.
pub fn enumerate_spectrum(model: &QuboModel, spec: &OracleSpec, cap: usize) -> Result<SpectrumReport> {
    let nv = check_cap(model, spec, cap)?;
    let low = nv.min(CHUNK_BITS);
    let mut energies = vec![0.0f64; 1usize << nv];
    energies
        .par_chunks_mut(1 << low)
        .enumerate()
        .for_each(|(c, chunk)| {
            let prefix = (c as u64) << low;
            walk_chunk(model, prefix, low, |mask, e| {
                chunk[(mask - prefix) as usize] = e;
            });
        });

    let levels = if model.is_integral() {
        let mut by_energy: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
        for (mask, &e) in energies.iter().enumerate() {
            by_energy.entry(e as i64).or_default().push(mask as u64);
        }
        by_energy
            .into_iter()
            .map(|(e, states)| SpectrumLevel {
                energy: e as f64,
                states,
            })
            .collect()
    } else {
        let mut order: Vec<u64> = (0..energies.len() as u64).collect();
        order.par_sort_by(|&a, &b| energies[a as usize].total_cmp(&energies[b as usize]).then(a.cmp(&b)));
        let mut levels: Vec<SpectrumLevel> = Vec::new();
        for mask in order {
            let e = energies[mask as usize];
            match levels.last_mut() {
                Some(level) if (e - level.energy).abs() <= ENERGY_TOLERANCE => {
                    level.states.push(mask)
                }
                _ => levels.push(SpectrumLevel {
                    energy: e,
                    states: vec![mask],
                }),
            }
        }
        for level in &mut levels {
            level.states.sort_unstable();
        }
        levels
    };
    Ok(SpectrumReport {
        spec: *spec,
        levels,
    })
}

/// Exhaustive ground-state search without storing the spectrum.
pub struct BruteForce {
    cap: usize,
    max_ground_states: usize,
}

impl BruteForce {
    pub fn new(cap: usize, max_ground_states: usize) -> Self {
        Self {
            cap,
            max_ground_states,
        }
    }
}

impl ExactSolver for BruteForce {
    fn name(&self) -> &'static str {
        "brute_force"
    }

    fn max_n(&self) -> Option<usize> {
        Some(self.cap.min(MASK_BITS).div_ceil(3))
    }

    fn solve(&self, model: &QuboModel, spec: &OracleSpec) -> Result<ExactSolution> {
        let nv = check_cap(model, spec, self.cap)?;
        let low = nv.min(CHUNK_BITS);
        // Candidates are kept within a small slack of the running minimum and
        // re-checked with exact energies after the merge.
        let slack = if model.is_integral() { 0.0 } else { 1e-6 };
        let chunks: Vec<(f64, Vec<u64>)> = (0..1u64 << (nv - low))
            .into_par_iter()
            .map(|c| {
                let mut best = f64::INFINITY;
                let mut states = Vec::new();
                walk_chunk(model, c << low, low, |mask, e| {
                    if e < best - slack {
                        best = e;
                        states.retain(|&(_, se): &(u64, f64)| se <= best + slack);
                    }
                    if e <= best + slack {
                        states.push((mask, e));
                    }
                });
                (best, states.into_iter().map(|(m, _)| m).collect())
            })
            .collect();

        let exact: Vec<(u64, f64)> = chunks
            .into_iter()
            .flat_map(|(_, states)| states)
            .map(|m| (m, model.energy_of_mask(m)))
            .collect();
        let ground = exact.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
        let states: Vec<u64> = exact
            .into_iter()
            .filter(|&(_, e)| model.same_energy(e, ground))
            .map(|(m, _)| m)
            .collect();
        if states.len() > self.max_ground_states {
            return Err(Error::DegeneracyTooLarge {
                count: states.len() as u128,
                limit: self.max_ground_states,
            });
        }
        let mut ground_states: Vec<Assignment> = states
            .into_iter()
            .map(|m| Assignment::from_mask(m, nv))
            .collect();
        ground_states.sort();
        Ok(ExactSolution {
            ground_energy: ground,
            degeneracy: ground_states.len() as u128,
            ground_states,
            method: SolveMethod::BruteForce,
        })
    }
}

/// Energy of the unpenalized XOR gadget on one row `(x1, x2, o, a)`.
pub fn gadget_energy(x1: u8, x2: u8, o: u8, a: u8) -> i64 {
    let (x1, x2, o, a) = (i64::from(x1), i64::from(x2), i64::from(o), i64::from(a));
    x1 + x2 + o + 4 * a + 2 * x1 * x2 - 2 * (x1 + x2) * o - 4 * (x1 + x2) * a + 4 * o * a
}

/// Checks all 16 rows of the single XOR gadget: zero exactly on valid rows,
/// strictly positive elsewhere.
pub fn verify_gadget_truth_table() -> bool {
    (0u8..16).all(|row| {
        let (x1, x2, o, a) = (row & 1, (row >> 1) & 1, (row >> 2) & 1, (row >> 3) & 1);
        let e = gadget_energy(x1, x2, o, a);
        if o == x1 ^ x2 && a == x1 & x2 {
            e == 0
        } else {
            e > 0
        }
    })
}
