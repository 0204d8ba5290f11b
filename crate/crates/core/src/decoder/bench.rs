use rayon::prelude::*;
use serde::Serialize;

use super::table::{bootstrap_stderr, build_table, logical_error_probability};
use crate::channel::linalg::cnot;
use crate::channel::gate_infidelity;
use crate::code::{Scenario, Serialization};
use crate::gates::GateSpec;
use crate::sim::{run, trajectory_rng, Backend, RunConfig, SyndromeDistribution};
use crate::{Error, Result};

pub const BOOTSTRAP_RESAMPLES: usize = 100;

/// One sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRecord {
    pub gate: String,
    pub scenario: String,
    pub param1_name: String,
    pub param1: f64,
    pub param2_name: String,
    pub param2: f64,
    pub p_init: f64,
    pub infidelity: f64,
    pub p_code: f64,
    pub p_code_stderr: f64,
    pub backend: String,
    pub n_samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchOptions {
    pub backend: Backend,
    /// Trajectories per encoded state.
    pub n_samples: u64,
    pub seed: u64,
    pub serialization: Serialization,
    pub max_width: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            backend: Backend::ExactDm,
            n_samples: 0,
            seed: 0,
            serialization: Serialization::Concurrent,
            max_width: crate::sim::DEFAULT_MAX_WIDTH,
        }
    }
}

pub fn scenario_name(s: Scenario) -> &'static str {
    match s {
        Scenario::I => "I",
        Scenario::II => "II",
    }
}

/// SplitMix64 finalizer, used to derive independent per-run seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one simulation inside a sweep, a pure function of the base seed
/// and the run's position so results do not depend on scheduling.
pub fn derived_seed(base: u64, p_init_index: usize, point_index: usize, encoded: u8) -> u64 {
    mix(mix(mix(base) ^ p_init_index as u64) ^ ((point_index as u64) << 1 | encoded as u64))
}

/// Both encoded-state distributions for one configuration.
pub fn encoded_distributions(
    base: &RunConfig,
    seeds: [u64; 2],
) -> Result<(SyndromeDistribution, SyndromeDistribution)> {
    let mut dists = Vec::with_capacity(2);
    for enc in 0..2u8 {
        let mut cfg = base.clone();
        cfg.encoded = enc;
        cfg.seed = seeds[enc as usize];
        dists.push(run(&cfg)?);
    }
    let d1 = dists.pop().expect("two runs");
    let d0 = dists.pop().expect("two runs");
    Ok((d0, d1))
}

fn run_point(
    gate: &GateSpec,
    scenario: Scenario,
    p_init: f64,
    opts: &BenchOptions,
    p_index: usize,
    point_index: usize,
) -> Result<BenchmarkRecord> {
    let channel = gate.channel()?;
    let infidelity = gate_infidelity(&channel, &cnot());
    let mut cfg = RunConfig::new(scenario, channel);
    cfg.p_init = p_init;
    cfg.backend = opts.backend;
    cfg.n_samples = opts.n_samples;
    cfg.serialization = opts.serialization;
    cfg.max_width = opts.max_width;
    let seeds = [
        derived_seed(opts.seed, p_index, point_index, 0),
        derived_seed(opts.seed, p_index, point_index, 1),
    ];
    let (d0, d1) = encoded_distributions(&cfg, seeds)?;
    let table = build_table(&d0, &d1);
    let p_code = logical_error_probability(&table, 0).clamp(0.0, 1.0);
    let mut rng = trajectory_rng(seeds[0] ^ seeds[1], u64::MAX);
    let p_code_stderr = bootstrap_stderr(&d0, &d1, BOOTSTRAP_RESAMPLES, &mut rng);
    let [(n1, v1), (n2, v2)] = gate.parameters();
    Ok(BenchmarkRecord {
        gate: gate.tag().to_string(),
        scenario: scenario_name(scenario).to_string(),
        param1_name: n1.to_string(),
        param1: v1,
        param2_name: n2.to_string(),
        param2: v2,
        p_init,
        infidelity,
        p_code,
        p_code_stderr,
        backend: opts.backend.name().to_string(),
        n_samples: if opts.backend == Backend::Trajectory {
            opts.n_samples
        } else {
            0
        },
        seed: opts.seed,
    })
}

/// Benchmark every grid point at every `p_init`. Records are ordered by
/// `p_init` first, then grid position, regardless of how work is scheduled
/// on the current rayon pool.
pub fn run_benchmark(
    grid: &[GateSpec],
    scenario: Scenario,
    p_inits: &[f64],
    opts: &BenchOptions,
) -> Result<Vec<BenchmarkRecord>> {
    let jobs: Vec<(usize, usize)> = (0..p_inits.len())
        .flat_map(|p| (0..grid.len()).map(move |g| (p, g)))
        .collect();
    jobs.par_iter()
        .map(|&(p, g)| {
            run_point(&grid[g], scenario, p_inits[p], opts, p, g).map_err(|e| Error::AtGridPoint {
                point: format!(
                    "{} {:?} p_init={} index={g}",
                    grid[g].tag(),
                    grid[g].parameters(),
                    p_inits[p]
                ),
                source: Box::new(e),
            })
        })
        .collect()
}
