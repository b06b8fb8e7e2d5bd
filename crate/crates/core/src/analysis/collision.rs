//! Classical baseline: query the oracle on fresh random inputs until two
//! outputs collide.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::recover_period;

pub const MAX_COLLISION_N: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionTrial {
    pub queries: u64,
    pub z: Vec<u8>,
    pub z_prime: Vec<u8>,
    pub period: Vec<u8>,
}

/// Input bit `k` of `x` is `x_{k+1}`; output bit `i` is `x_{i+1} XOR x_{i+2}`.
fn oracle(x: u32, n: usize) -> u32 {
    (x ^ (x >> 1)) & ((1u32 << (n - 1)) - 1)
}

fn to_bits(x: u32, n: usize) -> Vec<u8> {
    (0..n).map(|k| ((x >> k) & 1) as u8).collect()
}

pub fn classical_collision_trial(n: usize, seed: u64) -> Result<CollisionTrial> {
    if !(2..=MAX_COLLISION_N).contains(&n) {
        return Err(Error::InvalidConfig(format!(
            "collision trials need 2 <= n <= {MAX_COLLISION_N}, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queried: HashSet<u32> = HashSet::new();
    let mut by_output: HashMap<u32, u32> = HashMap::new();
    let domain = 1u32 << n;
    loop {
        let x = rng.gen_range(0..domain);
        if !queried.insert(x) {
            continue;
        }
        let out = oracle(x, n);
        if let Some(&prev) = by_output.get(&out) {
            let (z, z_prime) = (to_bits(prev, n), to_bits(x, n));
            let period = recover_period(&z, &z_prime)?;
            return Ok(CollisionTrial {
                queries: queried.len() as u64,
                z,
                z_prime,
                period,
            });
        }
        by_output.insert(out, x);
    }
}
