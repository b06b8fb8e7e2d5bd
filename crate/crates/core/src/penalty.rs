//! Output-qubit penalty vectors and the schemes that generate them.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::OracleSpec;
use crate::registry::Registry;

/// Magnitude used for the sign-pattern experiments.
pub const DEFAULT_MAGNITUDE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeTag {
    Zero,
    Uniform,
    Balanced,
    Random,
    Explicit,
}

impl SchemeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeTag::Zero => "zero",
            SchemeTag::Uniform => "uniform",
            SchemeTag::Balanced => "balanced",
            SchemeTag::Random => "random",
            SchemeTag::Explicit => "explicit",
        }
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "zero" => SchemeTag::Zero,
            "uniform" => SchemeTag::Uniform,
            "balanced" => SchemeTag::Balanced,
            "random" => SchemeTag::Random,
            "explicit" => SchemeTag::Explicit,
            other => {
                return Err(Error::UnknownStrategy {
                    kind: "penalty scheme",
                    name: other.to_string(),
                    known: "zero, uniform, balanced, random, explicit".into(),
                })
            }
        })
    }
}

/// A rule producing one penalty per output qubit from a magnitude and seed.
pub trait PenaltyScheme: Send + Sync {
    fn tag(&self) -> SchemeTag;
    fn values(&self, gadgets: usize, magnitude: f64, seed: u64) -> Vec<f64>;
}

pub struct Zero;
pub struct Uniform;
/// Alternating signs starting positive: `p_i = m * (-1)^(i+1)`.
pub struct Balanced;
/// Independent random signs at fixed magnitude, replayable from the seed.
pub struct RandomSigns;

impl PenaltyScheme for Zero {
    fn tag(&self) -> SchemeTag {
        SchemeTag::Zero
    }

    fn values(&self, gadgets: usize, _: f64, _: u64) -> Vec<f64> {
        vec![0.0; gadgets]
    }
}

impl PenaltyScheme for Uniform {
    fn tag(&self) -> SchemeTag {
        SchemeTag::Uniform
    }

    fn values(&self, gadgets: usize, magnitude: f64, _: u64) -> Vec<f64> {
        vec![magnitude; gadgets]
    }
}

impl PenaltyScheme for Balanced {
    fn tag(&self) -> SchemeTag {
        SchemeTag::Balanced
    }

    fn values(&self, gadgets: usize, magnitude: f64, _: u64) -> Vec<f64> {
        (0..gadgets)
            .map(|i| if i % 2 == 0 { magnitude } else { -magnitude })
            .collect()
    }
}

impl PenaltyScheme for RandomSigns {
    fn tag(&self) -> SchemeTag {
        SchemeTag::Random
    }

    fn values(&self, gadgets: usize, magnitude: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..gadgets)
            .map(|_| if rng.gen::<bool>() { magnitude } else { -magnitude })
            .collect()
    }
}

pub fn schemes() -> Registry<Box<dyn PenaltyScheme>> {
    let mut reg: Registry<Box<dyn PenaltyScheme>> = Registry::new("penalty scheme");
    reg.register("zero", Box::new(Zero))
        .register("uniform", Box::new(Uniform))
        .register("balanced", Box::new(Balanced))
        .register("random", Box::new(RandomSigns))
        .alias("alternating", "balanced");
    reg
}

/// Penalties `p_1..p_{n-1}` together with the scheme that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyConfig {
    p: Vec<f64>,
    scheme: SchemeTag,
    magnitude: f64,
    seed: Option<u64>,
}

impl PenaltyConfig {
    /// Looks `name` up in the scheme registry and generates `n - 1` penalties.
    pub fn from_scheme(spec: &OracleSpec, name: &str, magnitude: f64, seed: u64) -> Result<Self> {
        check_magnitude(magnitude)?;
        let registry = schemes();
        let scheme = registry.get(name)?;
        let tag = scheme.tag();
        Ok(Self {
            p: scheme.values(spec.gadgets(), magnitude, seed),
            scheme: tag,
            magnitude: if tag == SchemeTag::Zero { 0.0 } else { magnitude },
            seed: (tag == SchemeTag::Random).then_some(seed),
        })
    }

    pub fn zero(spec: &OracleSpec) -> Self {
        Self::from_scheme(spec, "zero", 0.0, 0).expect("zero scheme is always valid")
    }

    pub fn uniform(spec: &OracleSpec, magnitude: f64) -> Result<Self> {
        Self::from_scheme(spec, "uniform", magnitude, 0)
    }

    pub fn balanced(spec: &OracleSpec, magnitude: f64) -> Result<Self> {
        Self::from_scheme(spec, "balanced", magnitude, 0)
    }

    pub fn random(spec: &OracleSpec, magnitude: f64, seed: u64) -> Result<Self> {
        Self::from_scheme(spec, "random", magnitude, seed)
    }

    pub fn explicit(spec: &OracleSpec, p: Vec<f64>) -> Result<Self> {
        if let Some(bad) = p.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidPenalty(format!("{bad} is not finite")));
        }
        let cfg = Self {
            magnitude: p.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
            p,
            scheme: SchemeTag::Explicit,
            seed: None,
        };
        cfg.check_dims(spec)?;
        Ok(cfg)
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn scheme(&self) -> SchemeTag {
        self.scheme
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn is_integral(&self) -> bool {
        self.p.iter().all(|v| v.fract() == 0.0)
    }

    pub(crate) fn check_dims(&self, spec: &OracleSpec) -> Result<()> {
        if self.p.len() != spec.gadgets() {
            return Err(Error::PenaltyDimension {
                n: spec.n(),
                expected: spec.gadgets(),
                got: self.p.len(),
            });
        }
        Ok(())
    }
}

fn check_magnitude(m: f64) -> Result<()> {
    if !m.is_finite() || m < 0.0 {
        return Err(Error::InvalidPenalty(format!(
            "magnitude must be finite and nonnegative, got {m}"
        )));
    }
    Ok(())
}

/// Calibration diagnostics. Penalties are never rejected for their size.
#[derive(Debug, Clone, PartialEq)]
pub enum PenaltyWarning {
    /// `p_i = 0`: the output bit is not pinned and the ground level stays degenerate.
    Zero { index: usize },
    /// `0 < |p_i| <= 1`: too weak to discriminate outputs.
    TooLow { index: usize, value: f64 },
    /// `|p_i| >= n`: strong enough to swamp the gadget constraints.
    TooHigh { index: usize, value: f64, n: usize },
}

impl PenaltyWarning {
    pub fn index(&self) -> usize {
        match *self {
            PenaltyWarning::Zero { index }
            | PenaltyWarning::TooLow { index, .. }
            | PenaltyWarning::TooHigh { index, .. } => index,
        }
    }
}

impl fmt::Display for PenaltyWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PenaltyWarning::Zero { index } => {
                write!(f, "p_{} = 0 leaves output o_{} unpinned", index + 1, index + 1)
            }
            PenaltyWarning::TooLow { index, value } => {
                write!(f, "p_{} = {value}: magnitude <= 1 is too low", index + 1)
            }
            PenaltyWarning::TooHigh { index, value, n } => {
                write!(f, "p_{} = {value}: magnitude >= n = {n} is too high", index + 1)
            }
        }
    }
}

pub fn validate_penalties(spec: &OracleSpec, penalties: &PenaltyConfig) -> Vec<PenaltyWarning> {
    let n = spec.n();
    penalties
        .values()
        .iter()
        .enumerate()
        .filter_map(|(index, &value)| {
            let mag = value.abs();
            if mag == 0.0 {
                Some(PenaltyWarning::Zero { index })
            } else if mag >= n as f64 {
                Some(PenaltyWarning::TooHigh { index, value, n })
            } else if mag <= 1.0 {
                Some(PenaltyWarning::TooLow { index, value })
            } else {
                None
            }
        })
        .collect()
}
