//! Execution order for a schedule.
//!
//! Operations on disjoint qubits commute, so only the per-qubit order of a
//! schedule is physical. The planner walks the per-qubit dependency graph and
//! keeps the number of simultaneously allocated qubits small: it runs every
//! ready gate, then every ready measurement, and only allocates a new qubit
//! when nothing else can proceed. Two allocation rules are tried, most pending
//! interactions with live qubits first or plain schedule order, and the
//! narrower plan wins.

use std::collections::{BTreeMap, BTreeSet};

use crate::code::{ExtractionSchedule, Op};

#[derive(Debug, Clone)]
pub struct Plan {
    pub ops: Vec<Op>,
    /// Largest number of simultaneously allocated qubits.
    pub peak_width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Allocation {
    Interactions,
    ScheduleOrder,
}

pub fn plan(schedule: &ExtractionSchedule) -> Plan {
    let a = plan_with(schedule, Allocation::Interactions);
    let b = plan_with(schedule, Allocation::ScheduleOrder);
    if b.peak_width < a.peak_width {
        b
    } else {
        a
    }
}

fn plan_with(schedule: &ExtractionSchedule, rule: Allocation) -> Plan {
    let ops: Vec<Op> = schedule.ops().cloned().collect();
    let n = ops.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut last: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, op) in ops.iter().enumerate() {
        for q in op.qubits() {
            if let Some(&p) = last.get(&q) {
                if !preds[i].contains(&p) {
                    preds[i].push(p);
                    succs[p].push(i);
                }
            }
            last.insert(q, i);
        }
    }
    let mut missing: Vec<usize> = preds.iter().map(|p| p.len()).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| missing[i] == 0).collect();
    let mut done = vec![false; n];
    let mut alive: BTreeSet<usize> = BTreeSet::new();
    let mut order = Vec::with_capacity(n);
    let mut peak = 0;

    let complete = |i: usize,
                    ready: &mut BTreeSet<usize>,
                    missing: &mut Vec<usize>,
                    done: &mut Vec<bool>,
                    alive: &mut BTreeSet<usize>,
                    order: &mut Vec<Op>| {
        ready.remove(&i);
        done[i] = true;
        match &ops[i] {
            Op::Prepare { qubit } => {
                alive.insert(*qubit);
            }
            Op::Measure { qubit, .. } => {
                alive.remove(qubit);
            }
            _ => {}
        }
        order.push(ops[i].clone());
        for &s in &succs[i] {
            missing[s] -= 1;
            if missing[s] == 0 {
                ready.insert(s);
            }
        }
    };

    while order.len() < n {
        let gate = ready
            .iter()
            .copied()
            .find(|&i| !matches!(ops[i], Op::Prepare { .. } | Op::Measure { .. }));
        if let Some(i) = gate {
            complete(i, &mut ready, &mut missing, &mut done, &mut alive, &mut order);
            continue;
        }
        let meas = ready
            .iter()
            .copied()
            .find(|&i| matches!(ops[i], Op::Measure { .. }));
        if let Some(i) = meas {
            complete(i, &mut ready, &mut missing, &mut done, &mut alive, &mut order);
            continue;
        }
        // Allocation.
        let mut best: Option<((i64, i64, i64), usize)> = None;
        for &i in &ready {
            let Op::Prepare { qubit } = ops[i] else {
                continue;
            };
            let mut with_alive = 0i64;
            let mut with_dead = 0i64;
            for (j, op) in ops.iter().enumerate() {
                if done[j] {
                    continue;
                }
                let qs = op.qubits();
                if qs.len() < 2 || !qs.contains(&qubit) {
                    continue;
                }
                for q in qs {
                    if q == qubit {
                        continue;
                    }
                    if alive.contains(&q) {
                        with_alive += 1;
                    } else {
                        with_dead += 1;
                    }
                }
            }
            let score = match rule {
                Allocation::Interactions => (with_alive, -with_dead, -(qubit as i64)),
                Allocation::ScheduleOrder => (-(i as i64), 0, 0),
            };
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, i));
            }
        }
        let i = best.expect("schedule dependency graph is acyclic").1;
        complete(i, &mut ready, &mut missing, &mut done, &mut alive, &mut order);
        peak = peak.max(alive.len());
    }
    Plan {
        ops: order,
        peak_width: peak,
    }
}
