mod support;

use s17bench::code::{Scenario, Serialization};
use s17bench::sim::{run_exact, run_trajectories, Backend};
use support::ideal_config;
use support::pauli_oracle::{key_flip, noise_slots, oracle_distribution, Frame};

const SERIALIZATIONS: [Serialization; 2] = [Serialization::Concurrent, Serialization::Serialized];

#[test]
fn flips_are_linear_in_the_pauli() {
    for ser in SERIALIZATIONS {
        let sched = s17bench::code::build_schedule(Scenario::I, ser);
        let slots = noise_slots(&sched);
        assert_eq!(slots.len(), 13);
        for (i, q) in slots {
            let fx = key_flip(&sched, i, q, Frame::X);
            let fz = key_flip(&sched, i, q, Frame::Z);
            assert_eq!(key_flip(&sched, i, q, Frame::Y), fx ^ fz);
        }
    }
}

#[test]
fn exact_backend_matches_pauli_oracle() {
    for p in [0.002, 0.01] {
        for ser in SERIALIZATIONS {
            for enc in [0u8, 1] {
                let mut cfg = ideal_config(Scenario::I, p);
                cfg.serialization = ser;
                cfg.encoded = enc;
                let exact = run_exact(&cfg).unwrap();
                let oracle = oracle_distribution(&cfg.schedule(), p, (enc as u16) << 8);
                let mut worst: f64 = 0.0;
                for k in 0..512u16 {
                    let o = oracle.get(&k).copied().unwrap_or(0.0);
                    worst = worst.max((exact.get(k) - o).abs());
                }
                assert!(worst < 1e-10, "p={p} {ser:?} enc={enc}: {worst:e}");
            }
        }
    }
}

#[test]
fn trajectories_match_exact_within_four_sigma() {
    let mut cfg = ideal_config(Scenario::I, 0.01);
    let exact = run_exact(&cfg).unwrap();
    cfg.backend = Backend::Trajectory;
    cfg.n_samples = 20_000;
    cfg.seed = 11;
    let sampled = run_trajectories(&cfg).unwrap();
    let n = cfg.n_samples as f64;
    for k in 0..512u16 {
        let p = exact.get(k);
        let sigma = (p * (1.0 - p) / n).sqrt().max(1.0 / n);
        assert!(
            (sampled.get(k) - p).abs() <= 4.0 * sigma,
            "key {k:#x}: sampled {} exact {p}",
            sampled.get(k)
        );
    }
}
