use std::collections::BTreeMap;

use super::PauliString;
use crate::channel::Pauli;
use crate::{Error, Result};

/// Total number of physical qubits; labels run from 1 to 17.
pub const N_QUBITS: usize = 17;
pub const DATA_QUBITS: [usize; 9] = [9, 10, 11, 12, 13, 14, 15, 16, 17];
pub const ANCILLAS: [usize; 8] = [1, 2, 3, 4, 5, 6, 7, 8];
/// Data qubits whose local frame is Hadamard-rotated.
pub const ROTATED: [usize; 4] = [10, 12, 14, 16];
pub const Z_ANCILLAS: [usize; 4] = [1, 3, 6, 8];
pub const X_ANCILLAS: [usize; 4] = [2, 4, 5, 7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StabilizerType {
    X,
    Z,
}

/// One stabilizer generator and its measurement ancilla.
#[derive(Debug, Clone, PartialEq)]
pub struct Stabilizer {
    pub ancilla: usize,
    pub kind: StabilizerType,
    /// Data qubits in CNOT order.
    pub schedule: Vec<(usize, usize)>,
    pub operator: PauliString,
}

/// The 17-qubit surface code.
///
/// Data qubits form the grid
///
/// ```text
///  9 10 11
/// 12 13 14
/// 15 16 17
/// ```
///
/// In the plain CSS form the X plaquettes are 2 = {9,10,12,13},
/// 7 = {13,14,16,17}, 4 = {11,14}, 5 = {12,15} and the Z plaquettes are
/// 3 = {10,11,13,14}, 6 = {12,13,15,16}, 1 = {9,10}, 8 = {16,17}. Qubits 10,
/// 12, 14 and 16 carry a Hadamard frame change, which swaps X and Z on them.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub stabilizers: Vec<Stabilizer>,
    pub logical_z: PauliString,
    pub logical_x: PauliString,
}

/// Qubit label to Pauli-string bit.
pub fn bit(label: usize) -> usize {
    label - 1
}

fn rotate(label: usize, p: Pauli) -> Pauli {
    if ROTATED.contains(&label) {
        match p {
            Pauli::X => Pauli::Z,
            Pauli::Z => Pauli::X,
            Pauli::Y => Pauli::Y,
        }
    } else {
        p
    }
}

/// Pauli string over labelled qubits, with the frame change applied to
/// rotated qubits.
pub fn framed(terms: &[(usize, Pauli)]) -> PauliString {
    let t: Vec<(usize, Pauli)> = terms
        .iter()
        .map(|&(q, p)| (bit(q), rotate(q, p)))
        .collect();
    PauliString::from_terms(N_QUBITS, &t)
}

/// CNOT time slot (1..=4) of each data qubit for every stabilizer. X
/// plaquettes visit corners NW, NE, SW, SE; Z plaquettes NW, SW, NE, SE.
/// Boundary plaquettes keep the slots of the corners they own.
const LAYOUT: [(usize, StabilizerType, [(usize, usize); 4]); 8] = [
    (1, StabilizerType::Z, [(9, 2), (10, 4), (0, 0), (0, 0)]),
    (2, StabilizerType::X, [(9, 1), (10, 2), (12, 3), (13, 4)]),
    (3, StabilizerType::Z, [(10, 1), (13, 2), (11, 3), (14, 4)]),
    (4, StabilizerType::X, [(11, 1), (14, 3), (0, 0), (0, 0)]),
    (5, StabilizerType::X, [(12, 2), (15, 4), (0, 0), (0, 0)]),
    (6, StabilizerType::Z, [(12, 1), (15, 2), (13, 3), (16, 4)]),
    (7, StabilizerType::X, [(13, 1), (14, 2), (16, 3), (17, 4)]),
    (8, StabilizerType::Z, [(16, 1), (17, 3), (0, 0), (0, 0)]),
];

impl CodeSpec {
    pub fn s17() -> Self {
        let stabilizers = LAYOUT
            .iter()
            .map(|&(ancilla, kind, slots)| {
                let schedule: Vec<(usize, usize)> =
                    slots.iter().copied().filter(|&(q, _)| q != 0).collect();
                let p = match kind {
                    StabilizerType::X => Pauli::X,
                    StabilizerType::Z => Pauli::Z,
                };
                let terms: Vec<(usize, Pauli)> = schedule.iter().map(|&(q, _)| (q, p)).collect();
                Stabilizer {
                    ancilla,
                    kind,
                    schedule,
                    operator: framed(&terms),
                }
            })
            .collect();
        Self {
            stabilizers,
            logical_z: framed(&[(10, Pauli::Z), (13, Pauli::Z), (16, Pauli::Z)]),
            logical_x: framed(&[(12, Pauli::X), (13, Pauli::X), (14, Pauli::X)]),
        }
    }

    pub fn stabilizer(&self, ancilla: usize) -> Option<&Stabilizer> {
        self.stabilizers.iter().find(|s| s.ancilla == ancilla)
    }

    /// Syndrome bit `a - 1` is set iff the error anticommutes with the
    /// stabilizer measured by ancilla `a`.
    pub fn syndrome_of_error(&self, e: &PauliString) -> Result<u8> {
        let ancilla_mask: u64 = ANCILLAS.iter().map(|&a| 1u64 << bit(a)).sum();
        if e.support() & ancilla_mask != 0 {
            return Err(Error::SupportOnAncilla(e.to_string()));
        }
        let mut s = 0u8;
        for st in &self.stabilizers {
            if !e.commutes(&st.operator)? {
                s |= 1 << (st.ancilla - 1);
            }
        }
        Ok(s)
    }

    /// Membership in the stabilizer group, ignoring phase.
    pub fn in_stabilizer_group(&self, p: &PauliString) -> bool {
        let n = self.stabilizers.len();
        (0u32..1 << n).any(|mask| {
            let mut prod = PauliString::identity(N_QUBITS);
            for (i, st) in self.stabilizers.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prod.x ^= st.operator.x;
                    prod.z ^= st.operator.z;
                }
            }
            prod.same_up_to_phase(p)
        })
    }

    /// All 27 single-qubit Paulis on the data qubits.
    pub fn single_qubit_errors() -> Vec<PauliString> {
        DATA_QUBITS
            .iter()
            .flat_map(|&q| {
                [Pauli::X, Pauli::Y, Pauli::Z]
                    .into_iter()
                    .map(move |p| PauliString::single(N_QUBITS, bit(q), p))
            })
            .collect()
    }

    /// Same-syndrome pairs of single-qubit errors. Every such pair must
    /// differ by a stabilizer; otherwise the code is misdefined.
    pub fn degenerate_pairs(&self) -> Result<Vec<(PauliString, PauliString)>> {
        let mut groups: BTreeMap<u8, Vec<PauliString>> = BTreeMap::new();
        for e in Self::single_qubit_errors() {
            groups.entry(self.syndrome_of_error(&e)?).or_default().push(e);
        }
        let mut pairs = Vec::new();
        for members in groups.values() {
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    let (a, b) = (members[i], members[j]);
                    if !self.in_stabilizer_group(&a.mul(&b)?) {
                        return Err(Error::CodeSpecCorrupted(a.to_string(), b.to_string()));
                    }
                    pairs.push((a, b));
                }
            }
        }
        Ok(pairs)
    }

    /// Check generator commutation and the logical algebra.
    pub fn validate(&self) -> Result<()> {
        let ops: Vec<&PauliString> = self.stabilizers.iter().map(|s| &s.operator).collect();
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if !ops[i].commutes(ops[j])? {
                    return Err(Error::CodeSpecCorrupted(ops[i].to_string(), ops[j].to_string()));
                }
            }
            for l in [&self.logical_z, &self.logical_x] {
                if !ops[i].commutes(l)? {
                    return Err(Error::CodeSpecCorrupted(ops[i].to_string(), l.to_string()));
                }
            }
        }
        if self.logical_z.commutes(&self.logical_x)? {
            return Err(Error::CodeSpecCorrupted(
                self.logical_z.to_string(),
                self.logical_x.to_string(),
            ));
        }
        Ok(())
    }
}
