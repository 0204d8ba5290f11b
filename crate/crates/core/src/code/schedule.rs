use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::spec::{
    CodeSpec, StabilizerType, ANCILLAS, DATA_QUBITS, ROTATED, X_ANCILLAS, Z_ANCILLAS,
};
use crate::channel::Pauli;
use crate::{Error, Result};

/// Bit of the outcome key that carries the logical readout.
pub const LOGICAL_BIT: u16 = 8;
pub const KEY_BITS: u16 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    /// Z-ancilla round followed by direct readout of all data qubits.
    I,
    /// Prepared logical state, one full ancilla round, logical readout.
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Serialization {
    Concurrent,
    /// One ancilla at a time, allocated right before its CNOTs.
    Serialized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate1 {
    H,
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    /// Allocate a qubit in `|0>`.
    Prepare { qubit: usize },
    Gate { qubit: usize, gate: Gate1 },
    /// The two-qubit gate under test.
    Cnot { control: usize, target: usize },
    /// Preparation noise slot.
    Depolarize { qubit: usize },
    /// Apply `(1 + sign P)/2` and renormalize.
    Project { terms: Vec<(usize, Pauli)>, sign: i8 },
    /// Z-basis measurement. The outcome bit is XORed into every key bit set in
    /// `key_mask`; a zero mask discards the qubit.
    Measure { qubit: usize, key_mask: u16 },
}

impl Op {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Prepare { qubit }
            | Op::Gate { qubit, .. }
            | Op::Depolarize { qubit }
            | Op::Measure { qubit, .. } => vec![*qubit],
            Op::Cnot { control, target } => vec![*control, *target],
            Op::Project { terms, .. } => terms.iter().map(|t| t.0).collect(),
        }
    }
}

impl std::fmt::Display for Op {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Op::Prepare { qubit } => write!(f, "P0({qubit})"),
            Op::Gate { qubit, gate } => write!(f, "{gate:?}({qubit})"),
            Op::Cnot { control, target } => write!(f, "CX({control}->{target})"),
            Op::Depolarize { qubit } => write!(f, "DEP({qubit})"),
            Op::Project { terms, sign } => {
                let body: Vec<String> = terms.iter().map(|(q, p)| format!("{p:?}{q}")).collect();
                let s = if *sign >= 0 { '+' } else { '-' };
                write!(f, "PROJ({s}{})", body.join("."))
            }
            Op::Measure { qubit, key_mask } => write!(f, "M({qubit}:{key_mask:#05x})"),
        }
    }
}

/// Timesteps of disjoint operations.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionSchedule {
    pub scenario: Scenario,
    pub serialization: Serialization,
    pub encoded: u8,
    pub timesteps: Vec<Vec<Op>>,
}

impl ExtractionSchedule {
    pub fn ops(&self) -> impl Iterator<Item = &Op> {
        self.timesteps.iter().flatten()
    }

    /// Human-readable listing, one timestep per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# scenario {:?}, {:?}, encoded |{}>",
            self.scenario, self.serialization, self.encoded
        );
        for (i, step) in self.timesteps.iter().enumerate() {
            let ops: Vec<String> = step.iter().map(|o| o.to_string()).collect();
            let _ = writeln!(out, "t{i:03}: {}", ops.join(" "));
        }
        out
    }

    /// Check disjoint timesteps, allocate-before-use, and single measurement
    /// of every allocated qubit.
    pub fn validate(&self) -> Result<()> {
        let mut alive: BTreeSet<usize> = BTreeSet::new();
        let mut measured: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, step) in self.timesteps.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for op in step {
                for q in op.qubits() {
                    if !seen.insert(q) {
                        return Err(Error::InvalidSchedule(format!(
                            "qubit {q} appears twice in timestep {i}"
                        )));
                    }
                }
            }
            for op in step {
                match op {
                    Op::Prepare { qubit } => {
                        if !alive.insert(*qubit) || measured.contains_key(qubit) {
                            return Err(Error::InvalidSchedule(format!(
                                "qubit {qubit} prepared twice"
                            )));
                        }
                    }
                    Op::Measure { qubit, .. } => {
                        if !alive.remove(qubit) {
                            return Err(Error::InvalidSchedule(format!(
                                "qubit {qubit} measured while not allocated"
                            )));
                        }
                        *measured.entry(*qubit).or_default() += 1;
                    }
                    other => {
                        for q in other.qubits() {
                            if !alive.contains(&q) {
                                return Err(Error::InvalidSchedule(format!(
                                    "{other} acts on unallocated qubit {q}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        if let Some(q) = alive.iter().next() {
            return Err(Error::InvalidSchedule(format!("qubit {q} never measured")));
        }
        for a in self.ancillas() {
            if measured.get(&a) != Some(&1) {
                return Err(Error::InvalidSchedule(format!(
                    "ancilla {a} not measured exactly once"
                )));
            }
        }
        Ok(())
    }

    pub fn ancillas(&self) -> Vec<usize> {
        match self.scenario {
            Scenario::I => Z_ANCILLAS.to_vec(),
            Scenario::II => ANCILLAS.to_vec(),
        }
    }

    /// Multiset of non-structural operations, for comparing layouts.
    pub fn gate_multiset(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for op in self.ops() {
            *m.entry(op.to_string()).or_default() += 1;
        }
        m
    }
}

/// Key bit of the indirect (ancilla) result for a stabilizer.
pub fn ancilla_key_bit(scenario: Scenario, ancilla: usize) -> u16 {
    match scenario {
        Scenario::I => Z_ANCILLAS.iter().position(|&a| a == ancilla).expect("Z ancilla") as u16,
        Scenario::II => (ancilla - 1) as u16,
    }
}

/// Key mask contributed by the final measurement of a data qubit.
pub fn data_key_mask(code: &CodeSpec, scenario: Scenario, qubit: usize) -> u16 {
    let logical = if code.logical_z.support() >> super::spec::bit(qubit) & 1 == 1 {
        1 << LOGICAL_BIT
    } else {
        0
    };
    match scenario {
        Scenario::I => {
            let mut mask = logical;
            for (i, &a) in Z_ANCILLAS.iter().enumerate() {
                let st = code.stabilizer(a).expect("Z stabilizer");
                if st.schedule.iter().any(|&(q, _)| q == qubit) {
                    mask |= 1 << (4 + i);
                }
            }
            mask
        }
        Scenario::II => logical,
    }
}

fn hadamards(qubits: &[usize]) -> Vec<Op> {
    qubits
        .iter()
        .map(|&q| Op::Gate {
            qubit: q,
            gate: Gate1::H,
        })
        .collect()
}

fn logical_x_ops(code: &CodeSpec) -> Vec<Op> {
    code.logical_x
        .terms()
        .into_iter()
        .map(|(b, p)| Op::Gate {
            qubit: b + 1,
            gate: match p {
                Pauli::X => Gate1::X,
                Pauli::Y => Gate1::Y,
                Pauli::Z => Gate1::Z,
            },
        })
        .collect()
}

fn stabilizer_cnot(kind: StabilizerType, ancilla: usize, data: usize) -> Op {
    match kind {
        StabilizerType::Z => Op::Cnot {
            control: data,
            target: ancilla,
        },
        StabilizerType::X => Op::Cnot {
            control: ancilla,
            target: data,
        },
    }
}

/// Build the extraction schedule for encoded `|0>`.
pub fn build_schedule(scenario: Scenario, serialization: Serialization) -> ExtractionSchedule {
    build_encoded_schedule(scenario, serialization, 0)
}

/// Build the extraction schedule for encoded `|0>` or `|1>`.
pub fn build_encoded_schedule(
    scenario: Scenario,
    serialization: Serialization,
    encoded: u8,
) -> ExtractionSchedule {
    let code = CodeSpec::s17();
    let ancillas: Vec<usize> = match scenario {
        Scenario::I => Z_ANCILLAS.to_vec(),
        Scenario::II => ANCILLAS.to_vec(),
    };
    let x_ancillas: Vec<usize> = ancillas
        .iter()
        .copied()
        .filter(|a| X_ANCILLAS.contains(a))
        .collect();
    let concurrent = serialization == Serialization::Concurrent;
    let mut steps: Vec<Vec<Op>> = Vec::new();

    // Preparation.
    let mut prep: Vec<Op> = DATA_QUBITS.iter().map(|&q| Op::Prepare { qubit: q }).collect();
    if concurrent && scenario == Scenario::I {
        prep.extend(ancillas.iter().map(|&a| Op::Prepare { qubit: a }));
    }
    steps.push(prep);
    steps.push(hadamards(&ROTATED));
    if scenario == Scenario::II {
        for &a in &X_ANCILLAS {
            let st = code.stabilizer(a).expect("X stabilizer");
            let terms = st
                .operator
                .terms()
                .into_iter()
                .map(|(b, p)| (b + 1, p))
                .collect();
            steps.push(vec![Op::Project { terms, sign: 1 }]);
        }
    }
    if encoded == 1 {
        steps.push(logical_x_ops(&code));
    }

    // Preparation noise.
    let mut noisy: Vec<usize> = DATA_QUBITS.to_vec();
    if concurrent && scenario == Scenario::I {
        noisy.extend(&ancillas);
    }
    steps.push(noisy.iter().map(|&q| Op::Depolarize { qubit: q }).collect());

    // Ancilla round.
    if concurrent && scenario == Scenario::II {
        steps.push(ancillas.iter().map(|&a| Op::Prepare { qubit: a }).collect());
    }
    if concurrent && !x_ancillas.is_empty() {
        steps.push(hadamards(&x_ancillas));
    }
    steps.push(hadamards(&ROTATED));
    let measure_ancilla = |a: usize| Op::Measure {
        qubit: a,
        key_mask: 1 << ancilla_key_bit(scenario, a),
    };
    if concurrent {
        for slot in 1..=4 {
            let mut layer = Vec::new();
            for &a in &ancillas {
                let st = code.stabilizer(a).expect("stabilizer");
                for &(q, s) in &st.schedule {
                    if s == slot {
                        layer.push(stabilizer_cnot(st.kind, a, q));
                    }
                }
            }
            steps.push(layer);
        }
        steps.push(hadamards(&ROTATED));
        if !x_ancillas.is_empty() {
            steps.push(hadamards(&x_ancillas));
        }
        steps.push(ancillas.iter().map(|&a| measure_ancilla(a)).collect());
    } else {
        for &a in &ancillas {
            let st = code.stabilizer(a).expect("stabilizer");
            steps.push(vec![Op::Prepare { qubit: a }]);
            if scenario == Scenario::I {
                steps.push(vec![Op::Depolarize { qubit: a }]);
            }
            if st.kind == StabilizerType::X {
                steps.push(hadamards(&[a]));
            }
            let mut order = st.schedule.clone();
            order.sort_by_key(|&(_, s)| s);
            for (q, _) in order {
                steps.push(vec![stabilizer_cnot(st.kind, a, q)]);
            }
            if st.kind == StabilizerType::X {
                steps.push(hadamards(&[a]));
            }
            steps.push(vec![measure_ancilla(a)]);
        }
        steps.push(hadamards(&ROTATED));
    }

    // Data readout: rotated qubits in the X basis.
    steps.push(hadamards(&ROTATED));
    steps.push(
        DATA_QUBITS
            .iter()
            .map(|&q| Op::Measure {
                qubit: q,
                key_mask: data_key_mask(&code, scenario, q),
            })
            .collect(),
    );
    steps.retain(|s| !s.is_empty());

    ExtractionSchedule {
        scenario,
        serialization,
        encoded,
        timesteps: steps,
    }
}
