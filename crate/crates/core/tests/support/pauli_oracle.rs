//! Independent reference for scenario I with an ideal CNOT.
//!
//! Every operation in the schedule is Clifford and the only noise is Pauli,
//! so each depolarizing slot contributes an independent key flip. A Pauli
//! frame is pushed through the remaining gates and the flip is read off the
//! measured X components. The outcome distribution is the XOR-convolution of
//! the per-slot flip distributions, shifted by the noiseless key.

use std::collections::BTreeMap;

use s17bench::code::{ExtractionSchedule, Gate1, Op};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    X,
    Y,
    Z,
}

/// Key flip caused by `frame` on `qubit` right after schedule op `start`.
pub fn key_flip(schedule: &ExtractionSchedule, start: usize, qubit: usize, frame: Frame) -> u16 {
    let (mut x, mut z) = (0u32, 0u32);
    let bit = 1u32 << qubit;
    match frame {
        Frame::X => x |= bit,
        Frame::Y => {
            x |= bit;
            z |= bit;
        }
        Frame::Z => z |= bit,
    }
    let mut key = 0u16;
    for op in schedule.ops().skip(start + 1) {
        match *op {
            Op::Gate { qubit: q, gate: Gate1::H } => {
                let b = 1u32 << q;
                let (xb, zb) = (x & b, z & b);
                x = (x & !b) | zb;
                z = (z & !b) | xb;
            }
            Op::Gate { .. } | Op::Depolarize { .. } => {}
            Op::Cnot { control, target } => {
                if x >> control & 1 == 1 {
                    x ^= 1 << target;
                }
                if z >> target & 1 == 1 {
                    z ^= 1 << control;
                }
            }
            Op::Prepare { qubit: q } => {
                x &= !(1 << q);
                z &= !(1 << q);
            }
            Op::Measure { qubit: q, key_mask } => {
                if x >> q & 1 == 1 {
                    key ^= key_mask;
                }
                x &= !(1 << q);
                z &= !(1 << q);
            }
            Op::Project { .. } => panic!("oracle handles projection-free schedules only"),
        }
    }
    key
}

/// Exact outcome distribution for depolarizing strength `p`.
pub fn oracle_distribution(schedule: &ExtractionSchedule, p: f64, noiseless_key: u16) -> BTreeMap<u16, f64> {
    let mut dist = vec![0.0f64; 512];
    dist[noiseless_key as usize] = 1.0;
    let w_id = 1.0 - 0.75 * p;
    let w_pauli = 0.25 * p;
    for (i, op) in schedule.ops().enumerate() {
        let Op::Depolarize { qubit } = *op else { continue };
        let flips = [Frame::X, Frame::Y, Frame::Z].map(|f| key_flip(schedule, i, qubit, f));
        let mut next = vec![0.0f64; 512];
        for (k, &pk) in dist.iter().enumerate() {
            if pk == 0.0 {
                continue;
            }
            next[k] += pk * w_id;
            for f in flips {
                next[k ^ f as usize] += pk * w_pauli;
            }
        }
        dist = next;
    }
    dist.into_iter()
        .enumerate()
        .filter(|&(_, v)| v > 0.0)
        .map(|(k, v)| (k as u16, v))
        .collect()
}

/// Depolarizing slots of a schedule, as `(op index, qubit)`.
pub fn noise_slots(schedule: &ExtractionSchedule) -> Vec<(usize, usize)> {
    schedule
        .ops()
        .enumerate()
        .filter_map(|(i, op)| match *op {
            Op::Depolarize { qubit } => Some((i, qubit)),
            _ => None,
        })
        .collect()
}
