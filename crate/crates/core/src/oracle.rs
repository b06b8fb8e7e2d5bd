//! The all-ones-period Simon oracle `o_i = x_i XOR x_{i+1}` with ancillas
//! `a_i = x_i AND x_{i+1}`, and the bit assignments that live on it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::penalty::PenaltyConfig;

/// Problem dimensions: `n` input bits, `n - 1` outputs, `n - 1` ancillas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct OracleSpec {
    n: usize,
}

impl OracleSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of XOR gadgets, equal to the number of outputs and of ancillas.
    pub fn gadgets(&self) -> usize {
        self.n - 1
    }

    pub fn total_vars(&self) -> usize {
        3 * self.n - 2
    }

    pub fn input_index(&self, i: usize) -> usize {
        debug_assert!(i < self.n);
        i
    }

    pub fn output_index(&self, i: usize) -> usize {
        debug_assert!(i < self.gadgets());
        self.n + i
    }

    pub fn ancilla_index(&self, i: usize) -> usize {
        debug_assert!(i < self.gadgets());
        2 * self.n - 1 + i
    }

    /// Evaluates the oracle on an input register.
    pub fn evaluate(&self, input: &[u8]) -> Result<Vec<u8>> {
        if input.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: input.len(),
            });
        }
        Ok(input.windows(2).map(|w| w[0] ^ w[1]).collect())
    }

    /// The full valid assignment `(x, f(x), g(x))` for an input register.
    pub fn valid_assignment(&self, input: &[u8]) -> Result<Assignment> {
        let outputs = self.evaluate(input)?;
        let mut bits = Vec::with_capacity(self.total_vars());
        bits.extend_from_slice(input);
        bits.extend_from_slice(&outputs);
        bits.extend(input.windows(2).map(|w| w[0] & w[1]));
        Ok(Assignment { bits })
    }
}

impl TryFrom<usize> for OracleSpec {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<OracleSpec> for usize {
    fn from(spec: OracleSpec) -> usize {
        spec.n
    }
}

/// A full 0/1 assignment ordered as `x_1..x_n, o_1..o_{n-1}, a_1..a_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    bits: Vec<u8>,
}

impl Assignment {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidConfig(format!("bit value {bad} is not 0 or 1")));
        }
        Ok(Self { bits })
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    /// Bit `k` of `mask` becomes variable `k`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        Self {
            bits: (0..len).map(|k| ((mask >> k) & 1) as u8).collect(),
        }
    }

    pub fn to_mask(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(
            self.bits
                .iter()
                .enumerate()
                .fold(0u64, |m, (k, &b)| m | (u64::from(b) << k)),
        )
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn inputs(&self, spec: &OracleSpec) -> &[u8] {
        &self.bits[..spec.n()]
    }

    pub fn outputs(&self, spec: &OracleSpec) -> &[u8] {
        &self.bits[spec.n()..2 * spec.n() - 1]
    }

    pub fn ancillas(&self, spec: &OracleSpec) -> &[u8] {
        &self.bits[2 * spec.n() - 1..]
    }

    fn check_len(&self, spec: &OracleSpec) -> Result<()> {
        if self.bits.len() != spec.total_vars() {
            return Err(Error::LengthMismatch {
                expected: spec.total_vars(),
                got: self.bits.len(),
            });
        }
        Ok(())
    }
}

impl From<Vec<u8>> for Assignment {
    /// Nonzero entries are read as 1.
    fn from(bits: Vec<u8>) -> Self {
        Self {
            bits: bits.into_iter().map(|b| u8::from(b != 0)).collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bitstring(&self.bits))
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_bitstring(s).map(|bits| Self { bits })
    }
}

pub fn bitstring(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

pub fn parse_bitstring(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidConfig(format!(
                "'{other}' in bitstring '{s}' is not 0 or 1"
            ))),
        })
        .collect()
}

/// True iff every output is the XOR and every ancilla the AND of its two inputs.
pub fn is_oracle_valid(spec: &OracleSpec, assignment: &Assignment) -> Result<bool> {
    assignment.check_len(spec)?;
    let x = assignment.inputs(spec);
    let o = assignment.outputs(spec);
    let a = assignment.ancillas(spec);
    Ok((0..spec.gadgets()).all(|i| o[i] == x[i] ^ x[i + 1] && a[i] == x[i] & x[i + 1]))
}

/// The two oracle evaluations the penalties isolate at minimum energy.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundPair {
    pub target_output: Vec<u8>,
    /// The member whose input register starts with 0.
    pub state_a: Assignment,
    pub state_b: Assignment,
    pub ground_energy: f64,
    /// Set when some penalty is zero, so more than these two states share the ground level.
    pub degenerate_beyond_pair: bool,
}

impl GroundPair {
    pub fn period(&self, spec: &OracleSpec) -> Result<Vec<u8>> {
        recover_period(self.state_a.inputs(spec), self.state_b.inputs(spec))
    }
}

/// Predicts the ground pair from penalty signs alone: negative penalties
/// select `o_i = 1`, the rest select `o_i = 0`, and the input chain follows
/// from either choice of `x_1`.
pub fn predict_ground_pair(spec: &OracleSpec, penalties: &PenaltyConfig) -> Result<GroundPair> {
    penalties.check_dims(spec)?;
    let p = penalties.values();
    let target_output: Vec<u8> = p.iter().map(|&v| u8::from(v < 0.0)).collect();
    let chain = |first: u8| {
        let mut input = Vec::with_capacity(spec.n());
        input.push(first);
        for &o in &target_output {
            let prev = *input.last().unwrap();
            input.push(prev ^ o);
        }
        spec.valid_assignment(&input)
    };
    Ok(GroundPair {
        state_a: chain(0)?,
        state_b: chain(1)?,
        ground_energy: p.iter().filter(|&&v| v < 0.0).sum(),
        degenerate_beyond_pair: p.contains(&0.0),
        target_output,
    })
}

/// XOR of two colliding inputs, which for this oracle is the hidden period.
pub fn recover_period(z: &[u8], z_prime: &[u8]) -> Result<Vec<u8>> {
    if z.len() != z_prime.len() {
        return Err(Error::LengthMismatch {
            expected: z.len(),
            got: z_prime.len(),
        });
    }
    if z == z_prime {
        return Err(Error::IdenticalInputs);
    }
    Ok(z.iter().zip(z_prime).map(|(a, b)| a ^ b).collect())
}
