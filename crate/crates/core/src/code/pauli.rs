use std::fmt;

use crate::channel::Pauli;
use crate::{Error, Result};

/// Pauli product on up to 64 qubits. Bit `i` of `x`/`z` marks qubit `i`;
/// both bits set means `Y`. The phase is `i^phase`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub n: usize,
    pub x: u64,
    pub z: u64,
    pub phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 64, "at most 64 qubits");
        Self {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        Self::from_terms(n, &[(qubit, p)])
    }

    pub fn from_terms(n: usize, terms: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(q, p) in terms {
            assert!(q < n, "qubit {q} outside {n}-qubit string");
            let bit = 1u64 << q;
            match p {
                Pauli::X => s.x ^= bit,
                Pauli::Z => s.z ^= bit,
                Pauli::Y => {
                    s.x ^= bit;
                    s.z ^= bit;
                }
            }
        }
        s
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn get(&self, qubit: usize) -> Option<Pauli> {
        match ((self.x >> qubit) & 1, (self.z >> qubit) & 1) {
            (1, 0) => Some(Pauli::X),
            (0, 1) => Some(Pauli::Z),
            (1, 1) => Some(Pauli::Y),
            _ => None,
        }
    }

    pub fn terms(&self) -> Vec<(usize, Pauli)> {
        (0..self.n)
            .filter_map(|q| self.get(q).map(|p| (q, p)))
            .collect()
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "Pauli strings on {} and {} qubits",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Symplectic product test.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        let s = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(s % 2 == 0)
    }

    /// Operator product `self * other` with exact phase.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        // Write each as i^e X^x Z^z with Y = i X Z, multiply, convert back.
        let ny = |p: &Self| (p.x & p.z).count_ones();
        let e1 = self.phase as u32 + ny(self);
        let e2 = other.phase as u32 + ny(other);
        let swap = 2 * (self.z & other.x).count_ones();
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = e1 + e2 + swap;
        let out_ny = (x & z).count_ones();
        let phase = ((e + 4 * 64 - out_ny) % 4) as u8;
        Ok(Self {
            n: self.n,
            x,
            z,
            phase,
        })
    }

    /// Equal as operators up to a global phase.
    pub fn same_up_to_phase(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }
}

impl fmt::Display for PauliString {
    /// Qubits are printed 1-based, matching code-qubit labels.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize % 4];
        write!(f, "{sign}")?;
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for (q, p) in self.terms() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{:?}{}", p, q + 1)?;
        }
        Ok(())
    }
}
