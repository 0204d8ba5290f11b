use std::collections::BTreeMap;

use super::plan::plan;
use super::{Kernels, RunConfig, SyndromeDistribution};
use crate::channel::DensityMatrix;
use crate::code::{ExtractionSchedule, Op};
use crate::{Error, Result};

pub const DEFAULT_MAX_WIDTH: usize = 14;
/// Branches with total weight below this are dropped.
pub const PRUNE_EPS: f64 = 1e-14;
/// Upper bound on stored complex entries across all branches (about 2 GiB).
const MAX_ENTRIES: usize = 1 << 27;

/// Exact outcome distribution by density-matrix evolution.
pub fn run_exact(cfg: &RunConfig) -> Result<SyndromeDistribution> {
    run_exact_inspect(cfg, |_, _| {})
}

/// As [`run_exact`], calling `observe` after every executed operation with
/// the live branches keyed by partial outcome.
pub fn run_exact_inspect(
    cfg: &RunConfig,
    observe: impl FnMut(&Op, &BTreeMap<u16, DensityMatrix>),
) -> Result<SyndromeDistribution> {
    run_exact_schedule(cfg, &cfg.schedule(), observe)
}

/// Run an arbitrary schedule with the channels of `cfg`. The scenario,
/// serialization and encoded state of `cfg` are ignored.
pub fn run_exact_schedule(
    cfg: &RunConfig,
    schedule: &ExtractionSchedule,
    mut observe: impl FnMut(&Op, &BTreeMap<u16, DensityMatrix>),
) -> Result<SyndromeDistribution> {
    cfg.validate()?;
    schedule.validate()?;
    let plan = plan(schedule);
    if plan.peak_width > cfg.max_width {
        return Err(Error::WidthOverflow {
            peak: plan.peak_width,
            limit: cfg.max_width,
        });
    }
    let kernels = Kernels::new(cfg)?;
    let mut branches: BTreeMap<u16, DensityMatrix> = BTreeMap::new();
    branches.insert(0, DensityMatrix::scalar(1.0));

    for op in &plan.ops {
        match op {
            Op::Prepare { qubit } => {
                let width = branches.values().next().map_or(0, |r| r.n_qubits()) + 1;
                let entries = branches.len() << (2 * width);
                if entries > MAX_ENTRIES {
                    return Err(Error::WidthOverflow {
                        peak: width,
                        limit: cfg.max_width.min(width - 1),
                    });
                }
                for rho in branches.values_mut() {
                    rho.add_zero_qubit(*qubit)?;
                }
            }
            Op::Gate { qubit, gate } => {
                for rho in branches.values_mut() {
                    rho.apply_compiled(kernels.gate(*gate), &[*qubit])?;
                }
            }
            Op::Cnot { control, target } => {
                for rho in branches.values_mut() {
                    rho.apply_compiled(&kernels.cnot, &[*control, *target])?;
                }
            }
            Op::Depolarize { qubit } => {
                if let Some(ch) = &kernels.depolarize {
                    for rho in branches.values_mut() {
                        rho.apply_compiled(ch, &[*qubit])?;
                    }
                }
            }
            Op::Project { terms, sign } => {
                for rho in branches.values_mut() {
                    rho.project_pauli(terms, *sign as f64)?;
                }
                let total: f64 = branches.values().map(|r| r.trace()).sum();
                if total < PRUNE_EPS {
                    return Err(Error::BranchNormVanished { total });
                }
                for rho in branches.values_mut() {
                    rho.scale(1.0 / total);
                }
            }
            Op::Measure { qubit, key_mask } => {
                let mut next: BTreeMap<u16, DensityMatrix> = BTreeMap::new();
                let mut insert = |key: u16, rho: DensityMatrix| -> Result<()> {
                    if rho.trace() < PRUNE_EPS {
                        return Ok(());
                    }
                    match next.get_mut(&key) {
                        Some(acc) => acc.accumulate(&rho),
                        None => {
                            next.insert(key, rho);
                            Ok(())
                        }
                    }
                };
                for (key, rho) in std::mem::take(&mut branches) {
                    if *key_mask == 0 {
                        insert(key, rho.trace_out(*qubit)?)?;
                    } else {
                        let (zero, one) = rho.measure_split(*qubit)?;
                        insert(key, zero)?;
                        insert(key ^ key_mask, one)?;
                    }
                }
                branches = next;
            }
        }
        observe(op, &branches);
    }

    let probabilities = branches
        .into_iter()
        .map(|(k, rho)| (k, rho.trace()))
        .collect();
    Ok(SyndromeDistribution::exact(probabilities))
}
