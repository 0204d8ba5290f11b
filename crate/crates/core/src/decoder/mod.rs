//! Lookup-table decoding and the logical-error benchmark.

mod bench;
pub mod stats;
mod table;

pub use bench::{
    derived_seed, encoded_distributions, run_benchmark, scenario_name, BenchOptions,
    BenchmarkRecord, BOOTSTRAP_RESAMPLES,
};
pub use table::{
    bootstrap_stderr, build_table, logical_error_probability, resample, LookupTable, TIE_TOL,
};
