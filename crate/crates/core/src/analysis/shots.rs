//! How many shots it takes to see both members of the ground pair.
//!
//! With per-shot probabilities `p` and `q` for the two states, the chance
//! that `k` independent shots contain both is, by inclusion-exclusion over
//! "state missed in every shot",
//!
//! ```text
//! P(k) = 1 - (1-p)^k - (1-q)^k + (1-p-q)^k
//! ```
//!
//! and the expected waiting time until both have appeared is
//! `1/p + 1/q - 1/(p+q)`.

use serde::Serialize;

use crate::error::{Error, Result};

const SUM_SLACK: f64 = 1e-12;

fn check_pair(p_z: f64, p_zp: f64) -> Result<()> {
    for (name, p) in [("p_z", p_z), ("p_z'", p_zp)] {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(format!("{name} = {p} is not in [0, 1]")));
        }
    }
    if p_z + p_zp > 1.0 + SUM_SLACK {
        return Err(Error::InvalidProbability(format!(
            "p_z + p_z' = {} exceeds 1",
            p_z + p_zp
        )));
    }
    if p_z == 0.0 || p_zp == 0.0 {
        return Err(Error::Unreachable);
    }
    Ok(())
}

fn both_within(p_z: f64, p_zp: f64, k: u64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    let k = k.min(i32::MAX as u64) as i32;
    let neither = (1.0 - p_z - p_zp).max(0.0);
    let p = 1.0 - (1.0 - p_z).powi(k) - (1.0 - p_zp).powi(k) + neither.powi(k);
    p.clamp(0.0, 1.0)
}

/// Probability that `k` shots contain both ground-pair members at least once.
pub fn prob_both(p_z: f64, p_zp: f64, k: u64) -> Result<f64> {
    check_pair(p_z, p_zp)?;
    if k == 0 {
        return Err(Error::InvalidConfig("shot count must be at least 1".into()));
    }
    Ok(both_within(p_z, p_zp, k))
}

/// Expected number of shots until both members have been seen.
pub fn expected_shots_both(p_z: f64, p_zp: f64) -> Result<f64> {
    check_pair(p_z, p_zp)?;
    Ok(1.0 / p_z + 1.0 / p_zp - 1.0 / (p_z + p_zp))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotEstimate {
    pub p_z: f64,
    pub p_zp: f64,
    pub expected_shots_both: f64,
}

impl ShotEstimate {
    pub fn new(p_z: f64, p_zp: f64) -> Result<Self> {
        Ok(Self {
            p_z,
            p_zp,
            expected_shots_both: expected_shots_both(p_z, p_zp)?,
        })
    }

    pub fn prob_both_at(&self, k: u64) -> f64 {
        both_within(self.p_z, self.p_zp, k)
    }

    /// Smallest shot count whose both-seen probability reaches `confidence`.
    pub fn shots_for(&self, confidence: f64) -> Result<u64> {
        if !(confidence > 0.0 && confidence < 1.0) {
            return Err(Error::InvalidProbability(format!(
                "confidence {confidence} must lie strictly between 0 and 1"
            )));
        }
        // P(k) is nondecreasing: double, then bisect.
        let mut hi = 2u64;
        while self.prob_both_at(hi) < confidence {
            if hi > 1 << 62 {
                return Err(Error::Unreachable);
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if self.prob_both_at(mid) >= confidence {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}
