//! Channels, register states and fidelities.
//!
//! Register states address qubits by *label* (the code-qubit number). Each
//! label lives in a tensor slot; slot `s` is bit `s` of the basis index. When a
//! `2^k`-dimensional operator acts on labels `[q_0, ..., q_{k-1}]`, `q_0` is the
//! most significant bit of the operator's local index, so `cnot()` applied to
//! `[control, target]` has the usual meaning.

mod density;
mod fidelity;
mod kraus;
pub mod linalg;
pub mod random;
mod state;

pub use density::DensityMatrix;
pub use fidelity::{
    gate_infidelity, haar_gate_infidelity, pauli_eigenstates, product_test_states, state_fidelity,
};
pub use kraus::{kraus_from_superoperator, KrausChannel, CP_TOL, TP_TOL};
pub use linalg::{hermitian_exponential, ComplexMatrix, C64};
pub use state::{select_branch, StateVector};

use linalg::c;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Pauli::X => linalg::pauli_x(),
            Pauli::Y => linalg::pauli_y(),
            Pauli::Z => linalg::pauli_z(),
        }
    }
}

/// Row-major dense form of a channel prepared for repeated application on
/// register buffers.
#[derive(Debug, Clone)]
pub struct CompiledChannel {
    dim: usize,
    unitary: Option<Vec<C64>>,
    superop: Vec<C64>,
    kraus: Vec<Vec<C64>>,
}

fn row_major(m: &ComplexMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for k in 0..m.ncols() {
            out.push(m[(r, k)]);
        }
    }
    out
}

impl CompiledChannel {
    pub fn new(ch: &KrausChannel) -> Self {
        Self {
            dim: ch.dim(),
            unitary: ch.as_unitary().map(row_major),
            superop: row_major(&ch.superoperator()),
            kraus: ch.ops().iter().map(row_major).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn unitary(&self) -> Option<&[C64]> {
        self.unitary.as_deref()
    }

    pub fn superop(&self) -> &[C64] {
        &self.superop
    }

    pub fn kraus(&self) -> &[Vec<C64>] {
        &self.kraus
    }
}

/// Offsets of the `2^k` local basis states inside a register index, for the
/// given slots with the first slot as the most significant local bit.
pub(crate) fn local_offsets(slots: &[usize]) -> Vec<usize> {
    let k = slots.len();
    (0..1usize << k)
        .map(|l| {
            slots
                .iter()
                .enumerate()
                .map(|(j, &s)| ((l >> (k - 1 - j)) & 1) << s)
                .sum()
        })
        .collect()
}

/// Register indices whose bits at `mask` are all zero.
pub(crate) fn base_indices(n: usize, mask: usize) -> Vec<usize> {
    (0..1usize << n).filter(|i| i & mask == 0).collect()
}

/// Resolve labels to slots, rejecting unknown or repeated labels.
pub(crate) fn resolve_slots(labels: &[usize], targets: &[usize]) -> crate::Result<Vec<usize>> {
    let mut slots = Vec::with_capacity(targets.len());
    for &t in targets {
        let s = labels
            .iter()
            .position(|&l| l == t)
            .ok_or(crate::Error::TargetOutOfRange(t))?;
        if slots.contains(&s) {
            return Err(crate::Error::TargetCollision(t));
        }
        slots.push(s);
    }
    Ok(slots)
}

/// `i^{#Y} (-1)^{|i & z|}` phase and bit flip of a Pauli product on a basis index.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliAction {
    pub x_mask: usize,
    pub z_mask: usize,
    pub phase: C64,
}

impl PauliAction {
    pub fn new(slots_and_paulis: &[(usize, Pauli)], sign: f64) -> Self {
        let mut x_mask = 0;
        let mut z_mask = 0;
        let mut n_y = 0;
        for &(s, p) in slots_and_paulis {
            match p {
                Pauli::X => x_mask |= 1 << s,
                Pauli::Z => z_mask |= 1 << s,
                Pauli::Y => {
                    x_mask |= 1 << s;
                    z_mask |= 1 << s;
                    n_y += 1;
                }
            }
        }
        let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][n_y % 4] * sign;
        Self {
            x_mask,
            z_mask,
            phase,
        }
    }

    /// `P|i> = coeff(i) |i ^ x_mask>`.
    #[inline]
    pub fn coeff(&self, i: usize) -> C64 {
        if (i & self.z_mask).count_ones() % 2 == 1 {
            -self.phase
        } else {
            self.phase
        }
    }
}
