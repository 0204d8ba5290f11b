use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::sim::SyndromeDistribution;

/// Probabilities closer than this count as a tie.
pub const TIE_TOL: f64 = 1e-12;

/// Conditional outcome probabilities `(p0(s), p1(s))` for the two encoded
/// states, over full 9-bit outcome keys.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LookupTable {
    pub entries: BTreeMap<u16, (f64, f64)>,
}

pub fn build_table(dist0: &SyndromeDistribution, dist1: &SyndromeDistribution) -> LookupTable {
    let mut entries: BTreeMap<u16, (f64, f64)> = BTreeMap::new();
    for (&k, &p) in &dist0.probabilities {
        entries.entry(k).or_default().0 = p;
    }
    for (&k, &p) in &dist1.probabilities {
        entries.entry(k).or_default().1 = p;
    }
    LookupTable { entries }
}

impl LookupTable {
    /// Most likely encoded state for an outcome; `None` on a tie.
    pub fn decode(&self, key: u16) -> Option<u8> {
        let (p0, p1) = self.entries.get(&key).copied().unwrap_or_default();
        if (p0 - p1).abs() < TIE_TOL {
            None
        } else if p1 > p0 {
            Some(1)
        } else {
            Some(0)
        }
    }

    pub fn totals(&self) -> (f64, f64) {
        self.entries
            .values()
            .fold((0.0, 0.0), |(a, b), &(p0, p1)| (a + p0, b + p1))
    }
}

/// Probability that the decoder returns the wrong logical state. Ties are
/// settled by a fair coin, contributing half their weight.
pub fn logical_error_probability(table: &LookupTable, encoded: u8) -> f64 {
    table
        .entries
        .values()
        .map(|&(p0, p1)| {
            let (mine, other) = if encoded == 0 { (p0, p1) } else { (p1, p0) };
            if (mine - other).abs() < TIE_TOL {
                0.5 * mine
            } else if other > mine {
                mine
            } else {
                0.0
            }
        })
        .sum()
}

/// Multinomial resample of a sampled distribution by sequential binomials.
pub fn resample(dist: &SyndromeDistribution, rng: &mut impl Rng) -> SyndromeDistribution {
    let n = dist.n_samples;
    let mut remaining = n;
    let mut mass = 1.0;
    let mut counts = BTreeMap::new();
    let probs: Vec<(u16, f64)> = dist.probabilities.iter().map(|(&k, &p)| (k, p)).collect();
    for (i, &(k, p)) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let c = if i + 1 == probs.len() || mass <= p {
            remaining
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, q).expect("valid binomial").sample(rng)
        };
        if c > 0 {
            counts.insert(k, c);
        }
        remaining -= c;
        mass -= p;
    }
    SyndromeDistribution::from_counts(&counts, n)
}

/// Bootstrap standard error of `p_code` for encoded `|0>`; zero when both
/// distributions are exact.
pub fn bootstrap_stderr(
    dist0: &SyndromeDistribution,
    dist1: &SyndromeDistribution,
    resamples: usize,
    rng: &mut impl Rng,
) -> f64 {
    if !dist0.is_sampled() && !dist1.is_sampled() {
        return 0.0;
    }
    let draw = |d: &SyndromeDistribution, rng: &mut _| {
        if d.is_sampled() {
            resample(d, rng)
        } else {
            d.clone()
        }
    };
    let values: Vec<f64> = (0..resamples)
        .map(|_| {
            let a = draw(dist0, rng);
            let b = draw(dist1, rng);
            logical_error_probability(&build_table(&a, &b), 0)
        })
        .collect();
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
}
