use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Search and verification limits shared by all deciders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Bounded witness search length outside the exactly decided classes,
    /// and the iteration cap of the zero-set loop.
    pub witness_cap: u64,
    /// Described zero sets are checked against direct evaluation up to here.
    pub verify_cap: u64,
    /// Largest absolute value enumerated for S-unit triples.
    pub sunit_bound: u64,
    /// Largest common period used when normalizing semilinear sets.
    pub lcm_cap: u64,
    /// Exponent cap of the brute-force short-circuit in the ABC-Z decider.
    pub brute_cap: u64,
    /// Largest accepted matrix dimension.
    pub max_dim: usize,
    /// Number of solution-set members re-verified before reporting.
    pub sample_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            witness_cap: 10_000,
            verify_cap: 500,
            sunit_bound: 1_000_000,
            lcm_cap: 1 << 16,
            brute_cap: 12,
            max_dim: crate::linalg::DEFAULT_MAX_DIM,
            sample_cap: 100,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let caps = [
            ("witness_cap", self.witness_cap),
            ("verify_cap", self.verify_cap),
            ("sunit_bound", self.sunit_bound),
            ("lcm_cap", self.lcm_cap),
            ("brute_cap", self.brute_cap),
            ("max_dim", self.max_dim as u64),
        ];
        match caps.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(Error::InvalidInput(format!("{name} must be at least 1"))),
            None => Ok(()),
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if dim > self.max_dim {
            Err(Error::DimensionTooLarge { dim, cap: self.max_dim })
        } else {
            Ok(())
        }
    }
}
