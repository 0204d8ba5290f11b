use rand::Rng;

use super::linalg::{c, ComplexMatrix, C64};
use super::{
    base_indices, local_offsets, resolve_slots, CompiledChannel, KrausChannel, Pauli, PauliAction,
};
use crate::{Error, Result};

/// Branch weights below this are treated as impossible.
pub const BRANCH_EPS: f64 = 1e-14;

/// Pick a branch from (possibly unnormalized) weights with a uniform draw in
/// `[0, 1)`. Falls back to the last branch with nonzero weight so rounding can
/// never select an impossible branch.
pub fn select_branch(weights: &[f64], u: f64) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if total.is_nan() || total < BRANCH_EPS {
        return None;
    }
    let target = u * total;
    let mut acc = 0.0;
    let mut last = None;
    for (j, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = Some(j);
        if target < acc {
            return Some(j);
        }
    }
    last
}

/// Pure state over labelled qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zero_state(labels: Vec<usize>) -> Self {
        let mut amps = vec![C64::default(); 1 << labels.len()];
        amps[0] = c(1.0, 0.0);
        Self { labels, amps }
    }

    pub fn from_amplitudes(labels: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1usize << labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels need {} amplitudes, got {}",
                labels.len(),
                1usize << labels.len(),
                amps.len()
            )));
        }
        Ok(Self { labels, amps })
    }

    pub fn from_column(labels: Vec<usize>, v: &ComplexMatrix) -> Result<Self> {
        Self::from_amplitudes(labels, v.iter().copied().collect())
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if n < BRANCH_EPS {
            return Err(Error::BranchNormVanished { total: n });
        }
        let s = 1.0 / n.sqrt();
        for a in &mut self.amps {
            *a *= s;
        }
        Ok(())
    }

    /// Apply an arbitrary `2^k x 2^k` row-major operator to the given labels.
    pub fn apply_operator(&mut self, op: &[C64], targets: &[usize]) -> Result<()> {
        let slots = resolve_slots(&self.labels, targets)?;
        let d = 1usize << slots.len();
        if op.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "operator with {} entries on {} targets",
                op.len(),
                slots.len()
            )));
        }
        self.operator_on_slots(op, &slots);
        Ok(())
    }

    fn operator_on_slots(&mut self, op: &[C64], slots: &[usize]) {
        let d = 1usize << slots.len();
        let off = local_offsets(slots);
        let mut v = vec![C64::default(); d];
        for b in base_indices(self.n_qubits(), off[d - 1]) {
            for l in 0..d {
                v[l] = self.amps[b + off[l]];
            }
            for l in 0..d {
                let row = &op[l * d..(l + 1) * d];
                let mut acc = C64::default();
                for m in 0..d {
                    acc += row[m] * v[m];
                }
                self.amps[b + off[l]] = acc;
            }
        }
    }

    /// Reduced density matrix (row-major) of the given labels.
    pub fn reduced_density(&self, targets: &[usize]) -> Result<Vec<C64>> {
        let slots = resolve_slots(&self.labels, targets)?;
        Ok(self.reduced_on_slots(&slots))
    }

    fn reduced_on_slots(&self, slots: &[usize]) -> Vec<C64> {
        let d = 1usize << slots.len();
        let off = local_offsets(slots);
        let mut rho = vec![C64::default(); d * d];
        for b in base_indices(self.n_qubits(), off[d - 1]) {
            for a in 0..d {
                let x = self.amps[b + off[a]];
                if x == C64::default() {
                    continue;
                }
                for k in 0..d {
                    rho[a * d + k] += x * self.amps[b + off[k]].conj();
                }
            }
        }
        rho
    }

    /// Born weights `||K_j psi||^2` of each Kraus branch on the given labels.
    pub fn branch_weights(&self, ch: &CompiledChannel, targets: &[usize]) -> Result<Vec<f64>> {
        let slots = resolve_slots(&self.labels, targets)?;
        Ok(self.weights_on_slots(ch, &slots))
    }

    fn weights_on_slots(&self, ch: &CompiledChannel, slots: &[usize]) -> Vec<f64> {
        let rho = self.reduced_on_slots(slots);
        let d = ch.dim();
        ch.kraus()
            .iter()
            .map(|k| {
                // Tr(K rho K^dagger) = sum_{a,b,m} K[a][b] rho[b][m] conj(K[a][m])
                let mut acc = 0.0;
                for a in 0..d {
                    for b in 0..d {
                        let kab = k[a * d + b];
                        if kab == C64::default() {
                            continue;
                        }
                        let mut inner = C64::default();
                        for m in 0..d {
                            inner += rho[b * d + m] * k[a * d + m].conj();
                        }
                        acc += (kab * inner).re;
                    }
                }
                acc.max(0.0)
            })
            .collect()
    }

    /// Apply Kraus branch `j` and renormalize.
    pub fn apply_branch(&mut self, ch: &CompiledChannel, j: usize, targets: &[usize]) -> Result<()> {
        let slots = resolve_slots(&self.labels, targets)?;
        self.operator_on_slots(&ch.kraus()[j], &slots);
        self.normalize()
    }

    /// Sample a Kraus branch with probability `||K_j psi||^2` using one
    /// uniform draw (none for unitary channels) and return its index.
    pub fn trajectory_step(
        &mut self,
        ch: &KrausChannel,
        targets: &[usize],
        rng: &mut impl Rng,
    ) -> Result<usize> {
        self.trajectory_step_compiled(&CompiledChannel::new(ch), targets, rng)
    }

    pub fn trajectory_step_compiled(
        &mut self,
        ch: &CompiledChannel,
        targets: &[usize],
        rng: &mut impl Rng,
    ) -> Result<usize> {
        if ch.arity() != targets.len() {
            return Err(Error::DimensionMismatch(format!(
                "channel on {} qubits applied to {} targets",
                ch.arity(),
                targets.len()
            )));
        }
        let slots = resolve_slots(&self.labels, targets)?;
        if let Some(u) = ch.unitary() {
            self.operator_on_slots(u, &slots);
            return Ok(0);
        }
        let weights = self.weights_on_slots(ch, &slots);
        let u: f64 = rng.random();
        let total: f64 = weights.iter().sum();
        let j = select_branch(&weights, u).ok_or(Error::BranchNormVanished { total })?;
        self.operator_on_slots(&ch.kraus()[j], &slots);
        self.normalize()?;
        Ok(j)
    }

    pub fn add_zero_qubit(&mut self, label: usize) -> Result<()> {
        if self.labels.contains(&label) {
            return Err(Error::TargetCollision(label));
        }
        self.amps.resize(self.amps.len() * 2, C64::default());
        self.labels.push(label);
        Ok(())
    }

    /// Probability of reading 1 on a qubit.
    pub fn probability_one(&self, label: usize) -> Result<f64> {
        let slot = resolve_slots(&self.labels, &[label])?[0];
        let bit = 1usize << slot;
        let p1: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(p1 / self.norm_sqr())
    }

    /// Keep the given outcome of a qubit, remove it, and renormalize.
    pub fn collapse(&mut self, label: usize, outcome: u8) -> Result<()> {
        let slot = resolve_slots(&self.labels, &[label])?[0];
        let low = (1usize << slot) - 1;
        let half = self.amps.len() / 2;
        let bit = (outcome as usize & 1) << slot;
        let amps: Vec<C64> = (0..half)
            .map(|i| self.amps[((i & !low) << 1) | (i & low) | bit])
            .collect();
        self.amps = amps;
        self.labels.remove(slot);
        self.normalize()
    }

    /// Sample a computational-basis measurement of one qubit, remove it, and
    /// return the outcome. Always consumes one uniform draw.
    pub fn measure(&mut self, label: usize, rng: &mut impl Rng) -> Result<u8> {
        let p1 = self.probability_one(label)?;
        let u: f64 = rng.random();
        let outcome = select_branch(&[1.0 - p1, p1], u)
            .ok_or(Error::BranchNormVanished { total: 0.0 })? as u8;
        self.collapse(label, outcome)?;
        Ok(outcome)
    }

    /// Apply `(1 + sign P)/2` without renormalizing.
    pub fn project_pauli(&mut self, terms: &[(usize, Pauli)], sign: f64) -> Result<()> {
        let labels: Vec<usize> = terms.iter().map(|t| t.0).collect();
        let slots = resolve_slots(&self.labels, &labels)?;
        let with_slots: Vec<(usize, Pauli)> =
            slots.iter().zip(terms).map(|(&s, t)| (s, t.1)).collect();
        let p = PauliAction::new(&with_slots, sign);
        let old = self.amps.clone();
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a = (old[i] + p.coeff(i ^ p.x_mask) * old[i ^ p.x_mask]) * 0.5;
        }
        Ok(())
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.labels != other.labels {
            return Err(Error::DimensionMismatch("label layouts differ".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}
