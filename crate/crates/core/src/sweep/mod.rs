//! Sweep configuration, presets, execution and output.

pub mod config;
pub mod output;
pub mod presets;

pub use config::{
    cell_centres, ConfigError, GateKind, Layers, Origin, SweepConfig, DEFAULT_DELTA,
    DEFAULT_TRAJECTORIES, THREADS_ENV,
};
pub use output::{from_csv, summary_lines, to_csv, to_json, CSV_COLUMNS, SCHEMA_VERSION};

use crate::decoder::{run_benchmark, BenchOptions, BenchmarkRecord};
use crate::{Error, Result};

impl SweepConfig {
    pub fn bench_options(&self) -> BenchOptions {
        BenchOptions {
            backend: self.backend,
            n_samples: self.n_samples,
            seed: self.seed,
            serialization: self.serialization,
            max_width: self.max_width,
        }
    }
}

/// Run every gate series on the current rayon pool. Records are grouped by
/// gate in configuration order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<BenchmarkRecord>> {
    let opts = cfg.bench_options();
    let mut out = Vec::new();
    for &g in &cfg.gates {
        out.extend(run_benchmark(&cfg.grid_points(g), cfg.scenario, &cfg.p_inits, &opts)?);
    }
    Ok(out)
}

/// Run on a dedicated pool of `cfg.threads` workers, or the global pool.
pub fn run_sweep_pooled(cfg: &SweepConfig) -> Result<Vec<BenchmarkRecord>> {
    match cfg.threads {
        None => run_sweep(cfg),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?
            .install(|| run_sweep(cfg)),
    }
}
