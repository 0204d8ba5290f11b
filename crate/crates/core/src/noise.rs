//! Single-qubit Pauli noise channels.

use crate::channel::linalg::{c, identity, pauli_x, pauli_y, pauli_z};
use crate::channel::KrausChannel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    BitFlip(f64),
    PhaseFlip(f64),
    /// `rho -> (1 - p) rho + p I/2`.
    Depolarizing(f64),
}

impl NoiseKind {
    pub fn p(self) -> f64 {
        match self {
            NoiseKind::BitFlip(p) | NoiseKind::PhaseFlip(p) | NoiseKind::Depolarizing(p) => p,
        }
    }
}

pub fn noise_channel(kind: NoiseKind) -> Result<KrausChannel> {
    let p = kind.p();
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "probability must lie in [0, 1]",
        });
    }
    let s = |w: f64| c(w.sqrt(), 0.0);
    let ops = match kind {
        NoiseKind::BitFlip(_) => vec![identity(2) * s(1.0 - p), pauli_x() * s(p)],
        NoiseKind::PhaseFlip(_) => vec![identity(2) * s(1.0 - p), pauli_z() * s(p)],
        NoiseKind::Depolarizing(_) => vec![
            identity(2) * s(1.0 - 3.0 * p / 4.0),
            pauli_x() * s(p / 4.0),
            pauli_y() * s(p / 4.0),
            pauli_z() * s(p / 4.0),
        ],
    };
    KrausChannel::new(ops)
}

/// Pauli branch probabilities `(I, X, Y, Z)` of a depolarizing channel.
pub fn depolarizing_weights(p: f64) -> [f64; 4] {
    [1.0 - 3.0 * p / 4.0, p / 4.0, p / 4.0, p / 4.0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::linalg::{hadamard, max_abs_diff};
    use crate::channel::random::random_density_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all(p: f64) -> [NoiseKind; 3] {
        [
            NoiseKind::BitFlip(p),
            NoiseKind::PhaseFlip(p),
            NoiseKind::Depolarizing(p),
        ]
    }

    #[test]
    fn zero_probability_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density_matrix(2, &mut rng);
        for k in all(0.0) {
            let ch = noise_channel(k).unwrap();
            assert!(max_abs_diff(&ch.apply(&rho), &rho) < 1e-15);
        }
    }

    #[test]
    fn depolarizing_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in [0.1, 0.37, 1.0] {
            let ch = noise_channel(NoiseKind::Depolarizing(p)).unwrap();
            for _ in 0..20 {
                let rho = random_density_matrix(2, &mut rng);
                let expected = &rho * c(1.0 - p, 0.0) + identity(2) * c(p / 2.0, 0.0);
                assert!(max_abs_diff(&ch.apply(&rho), &expected) < 1e-12);
            }
        }
    }

    #[test]
    fn phase_flip_is_rotated_bit_flip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = 0.23;
        let bit = noise_channel(NoiseKind::BitFlip(p)).unwrap();
        let phase = noise_channel(NoiseKind::PhaseFlip(p)).unwrap();
        let h = hadamard();
        for _ in 0..20 {
            let rho = random_density_matrix(2, &mut rng);
            let via_h = &h * bit.apply(&(&h * &rho * &h)) * &h;
            assert!(max_abs_diff(&via_h, &phase.apply(&rho)) < 1e-12);
        }
    }

    #[test]
    fn unital_and_cptp_on_grid() {
        let half = identity(2) * c(0.5, 0.0);
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            for k in all(p) {
                let ch = noise_channel(k).unwrap();
                assert!(ch.tp_defect() < 1e-8);
                assert!(max_abs_diff(&ch.apply(&half), &half) < 1e-12);
                let min = crate::channel::linalg::eigh(&ch.choi())
                    .unwrap()
                    .0
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                assert!(min > -1e-8);
            }
        }
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(noise_channel(NoiseKind::BitFlip(-0.1)).is_err());
        assert!(noise_channel(NoiseKind::Depolarizing(1.5)).is_err());
        assert!(noise_channel(NoiseKind::PhaseFlip(f64::NAN)).is_err());
    }
}
