use std::collections::BTreeMap;

use crate::code::LOGICAL_BIT;

/// Probability over 9-bit outcome keys: bits 0..8 are syndrome information
/// and bit 8 is the logical readout.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SyndromeDistribution {
    pub probabilities: BTreeMap<u16, f64>,
    /// Per-outcome standard errors; empty for exact distributions.
    pub std_errors: BTreeMap<u16, f64>,
    /// Number of samples, or 0 for exact distributions.
    pub n_samples: u64,
}

impl SyndromeDistribution {
    pub fn exact(probabilities: BTreeMap<u16, f64>) -> Self {
        Self {
            probabilities,
            std_errors: BTreeMap::new(),
            n_samples: 0,
        }
    }

    pub fn from_counts(counts: &BTreeMap<u16, u64>, n_samples: u64) -> Self {
        let n = n_samples as f64;
        let mut probabilities = BTreeMap::new();
        let mut std_errors = BTreeMap::new();
        for (&k, &c) in counts {
            let p = c as f64 / n;
            probabilities.insert(k, p);
            std_errors.insert(k, (p * (1.0 - p) / n).sqrt());
        }
        Self {
            probabilities,
            std_errors,
            n_samples,
        }
    }

    pub fn is_sampled(&self) -> bool {
        self.n_samples > 0
    }

    pub fn get(&self, key: u16) -> f64 {
        self.probabilities.get(&key).copied().unwrap_or(0.0)
    }

    pub fn std_error(&self, key: u16) -> f64 {
        self.std_errors.get(&key).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }

    /// Integer counts behind a sampled distribution.
    pub fn counts(&self) -> BTreeMap<u16, u64> {
        let n = self.n_samples as f64;
        self.probabilities
            .iter()
            .map(|(&k, &p)| (k, (p * n).round() as u64))
            .collect()
    }

    /// Probability that the logical bit reads 1.
    pub fn logical_one(&self) -> f64 {
        self.probabilities
            .iter()
            .filter(|(k, _)| *k >> LOGICAL_BIT & 1 == 1)
            .map(|(_, p)| p)
            .sum()
    }

    /// Same distribution with the logical bit flipped on every key.
    pub fn with_logical_flipped(&self) -> Self {
        let flip = |m: &BTreeMap<u16, f64>| m.iter().map(|(&k, &v)| (k ^ (1 << LOGICAL_BIT), v)).collect();
        Self {
            probabilities: flip(&self.probabilities),
            std_errors: flip(&self.std_errors),
            n_samples: self.n_samples,
        }
    }

    /// Total-variation distance.
    pub fn tv_distance(&self, other: &Self) -> f64 {
        let mut keys: Vec<u16> = self.probabilities.keys().copied().collect();
        keys.extend(other.probabilities.keys());
        keys.sort_unstable();
        keys.dedup();
        0.5 * keys
            .iter()
            .map(|&k| (self.get(k) - other.get(k)).abs())
            .sum::<f64>()
    }
}
