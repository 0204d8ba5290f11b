mod support;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use s17bench::channel::linalg::eigh;
use s17bench::channel::random::{random_density_matrix, random_unitary};
use s17bench::channel::{gate_infidelity, state_fidelity, DensityMatrix, KrausChannel};
use s17bench::code::{build_schedule, Op, Scenario, Serialization};
use s17bench::decoder::{build_table, logical_error_probability};
use s17bench::gates::{FloatingGateParams, GateSpec, LdivParams, Variant};
use s17bench::noise::{noise_channel, NoiseKind};
use s17bench::sim::{run_exact, run_exact_schedule, run_trajectories, Backend, SyndromeDistribution};
use support::ideal_config;

fn noisy_gate(r: f64, g: f64, variant: Option<Variant>) -> KrausChannel {
    match variant {
        Some(variant) => GateSpec::Floating(FloatingGateParams { r, gamma_ratio: g, variant }),
        None => GateSpec::Ldiv(LdivParams {
            t: 1.0 + (r - 30.0) / 50.0,
            gamma: 0.007 + 0.02 * g,
            delta: -0.0145,
            include_k2: true,
        }),
    }
    .channel()
    .unwrap()
}

fn random_distribution(rng: &mut ChaCha8Rng, keys: usize) -> SyndromeDistribution {
    let mut m = BTreeMap::new();
    for _ in 0..keys {
        let k: u16 = rng.random_range(0..512);
        *m.entry(k).or_insert(0.0) += rng.random::<f64>();
    }
    let total: f64 = m.values().sum();
    m.values_mut().for_each(|v| *v /= total);
    SyndromeDistribution::exact(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn noise_channels_are_cptp(p in 0.0f64..=1.0, which in 0usize..3) {
        let kind = [NoiseKind::BitFlip(p), NoiseKind::PhaseFlip(p), NoiseKind::Depolarizing(p)][which];
        let ch = noise_channel(kind).unwrap();
        prop_assert!(ch.tp_defect() < 1e-12);
        let (evals, _) = eigh(&ch.choi()).unwrap();
        prop_assert!(evals.iter().all(|&l| l > -1e-12));
    }

    #[test]
    fn gate_channels_are_cptp(r in 30.0f64..35.0, g in 0.0f64..1.0, which in 0usize..3) {
        let variant = [Some(Variant::V1), Some(Variant::V2), None][which];
        let ch = noisy_gate(r, g, variant);
        prop_assert!(ch.tp_defect() < 1e-9);
        let (evals, _) = eigh(&ch.choi()).unwrap();
        prop_assert!(evals.iter().all(|&l| l > -1e-9));
    }

    #[test]
    fn applied_channels_keep_states_physical(seed: u64, r in 30.0f64..35.0, g in 0.0f64..1.0, p in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_density_matrix(8, &mut rng);
        let mut rho = DensityMatrix::from_matrix(vec![4, 7, 2], &m).unwrap();
        rho.apply_channel(&noisy_gate(r, g, None), &[2, 4]).unwrap();
        rho.apply_channel(&noise_channel(NoiseKind::Depolarizing(p)).unwrap(), &[7]).unwrap();
        rho.apply_channel(&noisy_gate(r, g, Some(Variant::V2)), &[7, 2]).unwrap();
        prop_assert!(rho.validate().is_ok());
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_is_symmetric_and_unitarily_invariant(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_density_matrix(4, &mut rng);
        let b = random_density_matrix(4, &mut rng);
        let u = random_unitary(4, &mut rng);
        let dm = |m: &_| DensityMatrix::from_matrix(vec![0, 1], m).unwrap();
        let fab = state_fidelity(&dm(&a), &dm(&b)).unwrap();
        let fba = state_fidelity(&dm(&b), &dm(&a)).unwrap();
        prop_assert!((fab - fba).abs() < 1e-10);
        let ua = &u * &a * u.adjoint();
        let ub = &u * &b * u.adjoint();
        let fu = state_fidelity(&dm(&ua), &dm(&ub)).unwrap();
        prop_assert!((fab - fu).abs() < 1e-10);
    }

    #[test]
    fn ldiv_infidelity_is_monotone_in_gamma(t in 1.0f64..1.1, g1 in 0.007f64..0.027, g2 in 0.007f64..0.027) {
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let inf = |gamma| GateSpec::Ldiv(LdivParams { t, gamma, delta: -0.0145, include_k2: true })
            .infidelity()
            .unwrap();
        prop_assert!(inf(lo) <= inf(hi) + 1e-12);
    }

    #[test]
    fn p_code_ignores_key_labels(seed: u64, xor in 0u16..512, rot in 0u32..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d0 = random_distribution(&mut rng, 40);
        let d1 = random_distribution(&mut rng, 40);
        let relabel = |k: u16| {
            let r = ((k << rot) | (k >> (9 - rot))) & 0x1ff;
            r ^ xor
        };
        let map = |d: &SyndromeDistribution| SyndromeDistribution::exact(
            d.probabilities.iter().map(|(&k, &v)| (relabel(k), v)).collect(),
        );
        let a = logical_error_probability(&build_table(&d0, &d1), 0);
        let b = logical_error_probability(&build_table(&map(&d0), &map(&d1)), 0);
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn exact_gates_have_zero_infidelity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let u = random_unitary(4, &mut rng);
        let ch = KrausChannel::unitary(u.clone()).unwrap();
        assert!(gate_infidelity(&ch, &u).abs() < 1e-10);
    }
}

fn floating_infidelity(r: f64, g: f64, variant: Variant) -> f64 {
    GateSpec::Floating(FloatingGateParams { r, gamma_ratio: g, variant })
        .infidelity()
        .unwrap()
}

fn max_step(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
}

fn range(values: &[f64]) -> f64 {
    values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min)
}

#[test]
fn floating_infidelity_is_continuous() {
    let n = 50;
    let centre = |i: usize, lo: f64, hi: f64, n: usize| lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
    for variant in [Variant::V1, Variant::V2] {
        let grid: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| floating_infidelity(centre(i, 30.0, 35.0, n), centre(j, 0.0, 1.0, n), variant))
                    .collect()
            })
            .collect();
        let all: Vec<f64> = grid.iter().flatten().copied().collect();
        let total = range(&all);
        for j in 0..n {
            let column: Vec<f64> = (0..n).map(|i| grid[i][j]).collect();
            assert!(max_step(&column) < 0.1 * total, "{variant:?} R steps at column {j}");
        }
        // Along gamma_ratio the Zeeman phase R t oscillates with a period of a
        // few 50-grid cells, so continuity is checked on a resolving line.
        let fine = 1000;
        for r in [30.05, 32.55, 34.95] {
            let line: Vec<f64> = (0..fine)
                .map(|j| floating_infidelity(r, centre(j, 0.0, 1.0, fine), variant))
                .collect();
            assert!(max_step(&line) < 0.1 * range(&line), "{variant:?} gamma steps at R={r}");
        }
    }
}

fn p_code_exact(scenario: Scenario, p: f64) -> f64 {
    let mut cfg = ideal_config(scenario, p);
    let d0 = run_exact(&cfg).unwrap();
    cfg.encoded = 1;
    let d1 = run_exact(&cfg).unwrap();
    logical_error_probability(&build_table(&d0, &d1), 0)
}

#[test]
fn p_code_grows_with_p_init() {
    let mut last = -1.0;
    for i in 0..=10 {
        let pc = p_code_exact(Scenario::I, i as f64 * 0.001);
        assert!(pc >= last - 1e-15, "p_init={}: {pc} < {last}", i as f64 * 0.001);
        last = pc;
    }
}

#[test]
fn scenario_two_readout_ignores_projection_branch() {
    let cfg = ideal_config(Scenario::II, 0.0);
    for enc in [0u8, 1] {
        let mut c = cfg.clone();
        c.encoded = enc;
        let base = c.schedule();
        for signs in 0u8..16 {
            let mut sched = base.clone();
            let mut idx = 0;
            for op in sched.timesteps.iter_mut().flatten() {
                if let Op::Project { sign, .. } = op {
                    *sign = if signs >> idx & 1 == 1 { -1 } else { 1 };
                    idx += 1;
                }
            }
            assert_eq!(idx, 4);
            let d = run_exact_schedule(&c, &sched, |_, _| {}).unwrap();
            let expect = if enc == 1 { 1.0 } else { 0.0 };
            assert!((d.logical_one() - expect).abs() < 1e-9, "enc {enc} signs {signs:04b}");
            assert_eq!(d.probabilities.values().filter(|&&p| p > 1e-9).count(), 1);
        }
    }
}

#[test]
fn cnot_order_within_a_stabilizer_does_not_matter_without_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for scenario in [Scenario::I, Scenario::II] {
        let cfg = ideal_config(scenario, 0.0);
        let base = build_schedule(scenario, Serialization::Serialized);
        let reference = run_exact(&{
            let mut c = cfg.clone();
            c.serialization = Serialization::Serialized;
            c
        })
        .unwrap();
        for _ in 0..3 {
            let mut sched = base.clone();
            // Serialized blocks hold one CNOT per timestep; shuffle each run.
            let mut i = 0;
            while i < sched.timesteps.len() {
                let is_cnot = |s: &Vec<Op>| s.len() == 1 && matches!(s[0], Op::Cnot { .. });
                if !is_cnot(&sched.timesteps[i]) {
                    i += 1;
                    continue;
                }
                let mut j = i;
                while j < sched.timesteps.len() && is_cnot(&sched.timesteps[j]) {
                    j += 1;
                }
                for k in (i + 1..j).rev() {
                    let m = rng.random_range(i..=k);
                    sched.timesteps.swap(k, m);
                }
                i = j;
            }
            let d = run_exact_schedule(&cfg, &sched, |_, _| {}).unwrap();
            assert!(d.tv_distance(&reference) < 1e-9, "{scenario:?}");
            assert!((d.get(0) - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn trajectory_estimates_are_unbiased() {
    let mut cfg = ideal_config(Scenario::I, 0.01);
    let exact = run_exact(&cfg).unwrap();
    cfg.backend = Backend::Trajectory;
    cfg.n_samples = 10_000;
    let seeds = 1..=20u64;
    let runs: Vec<SyndromeDistribution> = seeds
        .map(|s| {
            cfg.seed = s;
            run_trajectories(&cfg).unwrap()
        })
        .collect();
    let total_n = 20.0 * cfg.n_samples as f64;
    let mut checked = 0;
    let mut outside = 0;
    for (&k, &p) in &exact.probabilities {
        if p < 1e-4 {
            continue;
        }
        let mean: f64 = runs.iter().map(|d| d.get(k)).sum::<f64>() / 20.0;
        let sigma = (p * (1.0 - p) / total_n).sqrt();
        let z = (mean - p) / sigma;
        checked += 1;
        if z.abs() > 2.0 {
            outside += 1;
        }
        if k == 0 {
            assert!(z.abs() <= 2.0, "dominant outcome biased: z = {z}");
        }
    }
    // About 5% of unbiased outcomes land outside 2 sigma by chance.
    assert!(checked >= 10);
    assert!((outside as f64) <= 0.15 * checked as f64, "{outside}/{checked} outcomes beyond 2 sigma");
    let logical: f64 = runs.iter().map(|d| d.logical_one()).sum::<f64>() / 20.0;
    let pl = exact.logical_one();
    assert!((logical - pl).abs() <= 2.0 * (pl * (1.0 - pl) / total_n).sqrt());
}

#[test]
fn serialization_changes_outcomes_only_slightly() {
    for p in [0.002, 0.01] {
        let mut cfg = ideal_config(Scenario::I, p);
        let a = run_exact(&cfg).unwrap();
        cfg.serialization = Serialization::Serialized;
        let b = run_exact(&cfg).unwrap();
        let tv = a.tv_distance(&b);
        println!("scenario I p_init={p}: serialized vs concurrent total variation {tv:.3e}");
        assert!(tv <= p * 13.0);
    }
}
