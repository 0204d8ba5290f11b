use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::plan::plan;
use super::{Kernels, RunConfig, SyndromeDistribution};
use crate::channel::{select_branch, CompiledChannel, StateVector};
use crate::code::Op;
use crate::{Error, Result};

/// Random stream of trajectory `index`: ChaCha8 keyed by `seed`, stream `index`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

struct Walker<'a> {
    ops: &'a [Op],
    kernels: &'a Kernels,
    rngs: Vec<ChaCha8Rng>,
    counts: BTreeMap<u16, u64>,
}

/// Group trajectory ids by the branch their next uniform draw selects.
fn split(
    rngs: &mut [ChaCha8Rng],
    ids: Vec<u32>,
    weights: &[f64],
) -> Result<BTreeMap<usize, Vec<u32>>> {
    let total: f64 = weights.iter().sum();
    let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for id in ids {
        let u: f64 = rngs[id as usize].random();
        let j = select_branch(weights, u).ok_or(Error::BranchNormVanished { total })?;
        groups.entry(j).or_default().push(id);
    }
    Ok(groups)
}

impl Walker<'_> {
    fn descend(&mut self, mut pos: usize, mut psi: StateVector, ids: Vec<u32>, key: u16) -> Result<()> {
        while pos < self.ops.len() {
            let op = &self.ops[pos];
            pos += 1;
            match op {
                Op::Prepare { qubit } => psi.add_zero_qubit(*qubit)?,
                Op::Gate { qubit, gate } => {
                    let u = self.kernels.gate(*gate).unitary().expect("unitary gate");
                    psi.apply_operator(u, &[*qubit])?;
                }
                Op::Cnot { control, target } => {
                    let ch = &self.kernels.cnot;
                    return self.channel(pos, psi, ids, key, ch, &[*control, *target]);
                }
                Op::Depolarize { qubit } => {
                    if let Some(ch) = &self.kernels.depolarize {
                        return self.channel(pos, psi, ids, key, ch, &[*qubit]);
                    }
                }
                Op::Project { terms, sign } => {
                    psi.project_pauli(terms, *sign as f64)?;
                    psi.normalize()?;
                }
                Op::Measure { qubit, key_mask } => {
                    let p1 = psi.probability_one(*qubit)?;
                    let groups = split(&mut self.rngs, ids, &[1.0 - p1, p1])?;
                    let n_groups = groups.len();
                    for (i, (outcome, members)) in groups.into_iter().enumerate() {
                        let mut branch = if i + 1 == n_groups {
                            std::mem::replace(&mut psi, StateVector::zero_state(Vec::new()))
                        } else {
                            psi.clone()
                        };
                        branch.collapse(*qubit, outcome as u8)?;
                        let k = if outcome == 1 { key ^ key_mask } else { key };
                        self.descend(pos, branch, members, k)?;
                    }
                    return Ok(());
                }
            }
        }
        *self.counts.entry(key).or_default() += ids.len() as u64;
        Ok(())
    }

    fn channel(
        &mut self,
        pos: usize,
        mut psi: StateVector,
        ids: Vec<u32>,
        key: u16,
        ch: &CompiledChannel,
        targets: &[usize],
    ) -> Result<()> {
        if let Some(u) = ch.unitary() {
            psi.apply_operator(u, targets)?;
            return self.descend(pos, psi, ids, key);
        }
        let weights = psi.branch_weights(ch, targets)?;
        let groups = split(&mut self.rngs, ids, &weights)?;
        let n_groups = groups.len();
        for (i, (j, members)) in groups.into_iter().enumerate() {
            let mut branch = if i + 1 == n_groups {
                std::mem::replace(&mut psi, StateVector::zero_state(Vec::new()))
            } else {
                psi.clone()
            };
            branch.apply_branch(ch, j, targets)?;
            self.descend(pos, branch, members, key)?;
        }
        Ok(())
    }
}

/// Sampled outcome distribution from `cfg.n_samples` trajectories.
pub fn run_trajectories(cfg: &RunConfig) -> Result<SyndromeDistribution> {
    cfg.validate()?;
    if cfg.n_samples == 0 || cfg.n_samples > u32::MAX as u64 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            value: cfg.n_samples as f64,
            reason: "trajectory count must be between 1 and 2^32 - 1",
        });
    }
    let schedule = cfg.schedule();
    schedule.validate()?;
    let plan = plan(&schedule);
    let kernels = Kernels::new(cfg)?;
    let mut walker = Walker {
        ops: &plan.ops,
        kernels: &kernels,
        rngs: (0..cfg.n_samples).map(|i| trajectory_rng(cfg.seed, i)).collect(),
        counts: BTreeMap::new(),
    };
    let ids: Vec<u32> = (0..cfg.n_samples as u32).collect();
    walker.descend(0, StateVector::zero_state(Vec::new()), ids, 0)?;
    Ok(SyndromeDistribution::from_counts(&walker.counts, cfg.n_samples))
}

/// Reference implementation: every trajectory simulated on its own.
pub fn run_trajectories_naive(cfg: &RunConfig) -> Result<SyndromeDistribution> {
    cfg.validate()?;
    let schedule = cfg.schedule();
    schedule.validate()?;
    let plan = plan(&schedule);
    let kernels = Kernels::new(cfg)?;
    let mut counts: BTreeMap<u16, u64> = BTreeMap::new();
    for i in 0..cfg.n_samples {
        let mut rng = trajectory_rng(cfg.seed, i);
        let mut psi = StateVector::zero_state(Vec::new());
        let mut key = 0u16;
        for op in &plan.ops {
            match op {
                Op::Prepare { qubit } => psi.add_zero_qubit(*qubit)?,
                Op::Gate { qubit, gate } => {
                    psi.trajectory_step_compiled(kernels.gate(*gate), &[*qubit], &mut rng)?;
                }
                Op::Cnot { control, target } => {
                    psi.trajectory_step_compiled(&kernels.cnot, &[*control, *target], &mut rng)?;
                }
                Op::Depolarize { qubit } => {
                    if let Some(ch) = &kernels.depolarize {
                        psi.trajectory_step_compiled(ch, &[*qubit], &mut rng)?;
                    }
                }
                Op::Project { terms, sign } => {
                    psi.project_pauli(terms, *sign as f64)?;
                    psi.normalize()?;
                }
                Op::Measure { qubit, key_mask } => {
                    if psi.measure(*qubit, &mut rng)? == 1 {
                        key ^= key_mask;
                    }
                }
            }
        }
        *counts.entry(key).or_default() += 1;
    }
    Ok(SyndromeDistribution::from_counts(&counts, cfg.n_samples))
}
