//! Run parameters shared by every pipeline stage.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{is_prime, Field};
use crate::valtrees::GenParams;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid config: {0}")]
pub struct ConfigError(pub String);

/// Truncation bounds, pool size, seed, field and the prime list. Missing
/// fields take their defaults; `vmax` defaults to `depth + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "defaults::lambda")]
    pub lambda: u32,
    #[serde(default = "defaults::depth")]
    pub depth: u32,
    #[serde(default = "defaults::truncation")]
    pub truncation: u32,
    #[serde(default)]
    pub vmax: Option<u32>,
    #[serde(default = "defaults::pool_count")]
    pub pool_count: usize,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[serde(default = "defaults::field")]
    pub field: Field,
    #[serde(default)]
    pub primes: Vec<u64>,
}

mod defaults {
    use crate::exactlin::Field;

    pub fn lambda() -> u32 {
        2
    }
    pub fn depth() -> u32 {
        2
    }
    pub fn truncation() -> u32 {
        1
    }
    pub fn pool_count() -> usize {
        2
    }
    pub fn seed() -> u64 {
        1
    }
    pub fn field() -> Field {
        Field::Rational
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl RunConfig {
    /// λ=3, D=2, N=2, Vmax=3 with 13 trees; seed 7 gives a rank-49 module.
    pub fn medium() -> Self {
        RunConfig { lambda: 3, depth: 2, truncation: 2, vmax: Some(3), pool_count: 13, seed: 7, ..Self::default() }
    }

    pub fn vmax(&self) -> u32 {
        self.vmax.unwrap_or(self.depth + 1)
    }

    pub fn gen_params(&self) -> GenParams {
        GenParams::new(self.lambda, self.depth, self.vmax(), self.pool_count, self.seed)
    }

    /// Truncation 0 is accepted (a rank-1 module) even though the interesting
    /// configurations have N ≥ 1.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.lambda < 2 {
            return Err(ConfigError(format!("lambda must be at least 2, got {}", self.lambda)));
        }
        if self.depth < 1 {
            return Err(ConfigError("depth must be at least 1".into()));
        }
        if self.pool_count == 0 {
            return Err(ConfigError("pool_count must be positive".into()));
        }
        for (i, &p) in self.primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(ConfigError(format!("{p} is not prime")));
            }
            if self.primes[..i].contains(&p) {
                return Err(ConfigError(format!("prime {p} listed twice")));
            }
        }
        Ok(())
    }
}
