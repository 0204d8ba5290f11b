use super::linalg::{c, eigh, ComplexMatrix, C64};
use super::{
    base_indices, local_offsets, resolve_slots, CompiledChannel, KrausChannel, Pauli, PauliAction,
    StateVector,
};
use crate::{Error, Result};

/// Dense density matrix over labelled qubits, stored row-major.
///
/// Intermediate simulation states may be unnormalized (branch weights are
/// carried in the trace); [`DensityMatrix::validate`] checks the physical
/// invariants on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<usize>,
    data: Vec<C64>,
}

impl DensityMatrix {
    /// `|0...0><0...0|` on the given labels.
    pub fn zero_state(labels: Vec<usize>) -> Self {
        let dim = 1usize << labels.len();
        let mut data = vec![C64::default(); dim * dim];
        data[0] = c(1.0, 0.0);
        Self { labels, data }
    }

    /// Empty register: the scalar 1.
    pub fn scalar(weight: f64) -> Self {
        Self {
            labels: Vec::new(),
            data: vec![c(weight, 0.0)],
        }
    }

    pub fn from_matrix(labels: Vec<usize>, m: &ComplexMatrix) -> Result<Self> {
        let dim = 1usize << labels.len();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} labels need a {dim}x{dim} matrix, got {}x{}",
                labels.len(),
                m.nrows(),
                m.ncols()
            )));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for k in 0..dim {
                data.push(m[(r, k)]);
            }
        }
        Ok(Self { labels, data })
    }

    pub fn from_state(psi: &StateVector) -> Self {
        let amps = psi.amplitudes();
        let dim = amps.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in amps {
            for b in amps {
                data.push(a * b.conj());
            }
        }
        Self {
            labels: psi.labels().to_vec(),
            data,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_row_slice(d, d, &self.data)
    }

    pub fn trace(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i].re).sum()
    }

    pub fn scale(&mut self, factor: f64) {
        for z in &mut self.data {
            *z *= factor;
        }
    }

    /// Add another state with the same label layout.
    pub fn accumulate(&mut self, other: &DensityMatrix) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::DimensionMismatch(
                "cannot add density matrices with different layouts".into(),
            ));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for k in r..d {
                worst = worst.max((self.data[r * d + k] - self.data[k * d + r].conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigh(&self.to_matrix())?.0)
    }

    /// Check Hermiticity (1e-10), unit trace (1e-9) and positivity (-1e-9).
    pub fn validate(&self) -> Result<()> {
        let asym = self.max_hermitian_defect();
        if asym > 1e-10 {
            return Err(Error::NonHermitian {
                max_asymmetry: asym,
            });
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::NotTracePreserving {
                defect: (tr - 1.0).abs(),
            });
        }
        let min = self
            .eigenvalues()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-9 {
            return Err(Error::NotCompletelyPositive {
                eigenvalue: min,
                tolerance: 1e-9,
            });
        }
        Ok(())
    }

    pub fn apply_channel(&mut self, ch: &KrausChannel, targets: &[usize]) -> Result<()> {
        self.apply_compiled(&CompiledChannel::new(ch), targets)
    }

    pub fn apply_compiled(&mut self, ch: &CompiledChannel, targets: &[usize]) -> Result<()> {
        if ch.arity() != targets.len() {
            return Err(Error::DimensionMismatch(format!(
                "channel on {} qubits applied to {} targets",
                ch.arity(),
                targets.len()
            )));
        }
        let slots = resolve_slots(&self.labels, targets)?;
        match ch.unitary() {
            Some(u) => self.unitary_on_slots(u, &slots),
            None => self.superop_on_slots(ch.superop(), &slots),
        }
        Ok(())
    }

    fn unitary_on_slots(&mut self, u: &[C64], slots: &[usize]) {
        let n = self.n_qubits();
        let dim = self.dim();
        let d = 1usize << slots.len();
        let off = local_offsets(slots);
        let mask = off[d - 1];
        let bases = base_indices(n, mask);
        let mut v = vec![C64::default(); d];
        // rho <- U rho
        for col in 0..dim {
            for &b in &bases {
                for l in 0..d {
                    v[l] = self.data[(b + off[l]) * dim + col];
                }
                for l in 0..d {
                    let row = &u[l * d..(l + 1) * d];
                    let mut acc = C64::default();
                    for m in 0..d {
                        acc += row[m] * v[m];
                    }
                    self.data[(b + off[l]) * dim + col] = acc;
                }
            }
        }
        // rho <- rho U^dagger
        for row in 0..dim {
            let line = &mut self.data[row * dim..(row + 1) * dim];
            for &b in &bases {
                for l in 0..d {
                    v[l] = line[b + off[l]];
                }
                for l in 0..d {
                    let urow = &u[l * d..(l + 1) * d];
                    let mut acc = C64::default();
                    for m in 0..d {
                        acc += urow[m].conj() * v[m];
                    }
                    line[b + off[l]] = acc;
                }
            }
        }
    }

    fn superop_on_slots(&mut self, s: &[C64], slots: &[usize]) {
        let n = self.n_qubits();
        let dim = self.dim();
        let d = 1usize << slots.len();
        let d2 = d * d;
        let off = local_offsets(slots);
        let bases = base_indices(n, off[d - 1]);
        let mut block = vec![C64::default(); d2];
        for &r0 in &bases {
            for &c0 in &bases {
                for b in 0..d {
                    for a in 0..d {
                        block[a + d * b] = self.data[(r0 + off[a]) * dim + c0 + off[b]];
                    }
                }
                for b in 0..d {
                    for a in 0..d {
                        let row = &s[(a + d * b) * d2..(a + d * b + 1) * d2];
                        let mut acc = C64::default();
                        for (x, y) in row.iter().zip(&block) {
                            acc += x * y;
                        }
                        self.data[(r0 + off[a]) * dim + c0 + off[b]] = acc;
                    }
                }
            }
        }
    }

    /// Append a fresh qubit in `|0>` as the new most significant slot.
    pub fn add_zero_qubit(&mut self, label: usize) -> Result<()> {
        if self.labels.contains(&label) {
            return Err(Error::TargetCollision(label));
        }
        let old = self.dim();
        let new = old * 2;
        let mut data = vec![C64::default(); new * new];
        for r in 0..old {
            data[r * new..r * new + old].copy_from_slice(&self.data[r * old..(r + 1) * old]);
        }
        self.data = data;
        self.labels.push(label);
        Ok(())
    }

    /// Project one qubit onto each computational basis state and remove it.
    /// Returns the unnormalized conditional states for outcomes 0 and 1.
    pub fn measure_split(&self, label: usize) -> Result<(DensityMatrix, DensityMatrix)> {
        let slot = resolve_slots(&self.labels, &[label])?[0];
        Ok((self.restrict(slot, 0), self.restrict(slot, 1)))
    }

    /// Partial trace over one qubit.
    pub fn trace_out(&self, label: usize) -> Result<DensityMatrix> {
        let slot = resolve_slots(&self.labels, &[label])?[0];
        let mut a = self.restrict(slot, 0);
        let b = self.restrict(slot, 1);
        for (x, y) in a.data.iter_mut().zip(&b.data) {
            *x += y;
        }
        Ok(a)
    }

    fn restrict(&self, slot: usize, bit: usize) -> DensityMatrix {
        let dim = self.dim();
        let half = dim / 2;
        let low = (1usize << slot) - 1;
        let expand = |i: usize| ((i & !low) << 1) | (i & low) | (bit << slot);
        let map: Vec<usize> = (0..half).map(expand).collect();
        let mut data = Vec::with_capacity(half * half);
        for &r in &map {
            let line = &self.data[r * dim..(r + 1) * dim];
            data.extend(map.iter().map(|&k| line[k]));
        }
        let mut labels = self.labels.clone();
        labels.remove(slot);
        DensityMatrix { labels, data }
    }

    /// Apply the projector `(1 + sign P) / 2` for a Pauli product `P` on
    /// labelled qubits. The result is unnormalized.
    pub fn project_pauli(&mut self, terms: &[(usize, Pauli)], sign: f64) -> Result<()> {
        let labels: Vec<usize> = terms.iter().map(|t| t.0).collect();
        let slots = resolve_slots(&self.labels, &labels)?;
        let with_slots: Vec<(usize, Pauli)> =
            slots.iter().zip(terms).map(|(&s, t)| (s, t.1)).collect();
        let p = PauliAction::new(&with_slots, sign);
        let dim = self.dim();
        let x = p.x_mask;
        let old = &self.data;
        let mut data = vec![C64::default(); dim * dim];
        for r in 0..dim {
            let cr = p.coeff(r ^ x);
            for k in 0..dim {
                let ck = p.coeff(k ^ x).conj();
                let v = old[r * dim + k]
                    + cr * old[(r ^ x) * dim + k]
                    + ck * old[r * dim + (k ^ x)]
                    + cr * ck * old[(r ^ x) * dim + (k ^ x)];
                data[r * dim + k] = v * 0.25;
            }
        }
        self.data = data;
        Ok(())
    }

    /// Expectation value `Tr(rho P)` of a Pauli product, real part.
    pub fn pauli_expectation(&self, terms: &[(usize, Pauli)]) -> Result<f64> {
        let labels: Vec<usize> = terms.iter().map(|t| t.0).collect();
        let slots = resolve_slots(&self.labels, &labels)?;
        let with_slots: Vec<(usize, Pauli)> =
            slots.iter().zip(terms).map(|(&s, t)| (s, t.1)).collect();
        let p = PauliAction::new(&with_slots, 1.0);
        let dim = self.dim();
        // Tr(rho P) = sum_i <i|rho P|i> = sum_i rho[i][i^x] coeff(i)
        let mut acc = C64::default();
        for i in 0..dim {
            acc += self.data[i * dim + (i ^ p.x_mask)] * p.coeff(i);
        }
        Ok(acc.re)
    }

    /// Reorder slots so labels appear in the given order (first = slot 0).
    pub fn permuted(&self, order: &[usize]) -> Result<DensityMatrix> {
        if order.len() != self.labels.len() {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        let src = resolve_slots(&self.labels, order)?;
        let dim = self.dim();
        let map: Vec<usize> = (0..dim)
            .map(|i| {
                src.iter()
                    .enumerate()
                    .map(|(new, &old)| ((i >> new) & 1) << old)
                    .sum()
            })
            .collect();
        let mut data = Vec::with_capacity(dim * dim);
        for &r in &map {
            for &k in &map {
                data.push(self.data[r * dim + k]);
            }
        }
        Ok(DensityMatrix {
            labels: order.to_vec(),
            data,
        })
    }
}
