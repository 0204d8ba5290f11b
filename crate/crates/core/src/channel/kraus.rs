use super::linalg::{
    c, eigh, identity, is_unitary, kron, max_abs_diff, unitary_defect, ComplexMatrix,
};
use crate::{Error, Result};

/// Trace-preservation tolerance enforced on every constructed channel.
pub const TP_TOL: f64 = 1e-8;
/// Default clipping tolerance for slightly negative Choi eigenvalues.
pub const CP_TOL: f64 = 1e-8;
/// Trace-preservation defect that aborts superoperator conversion.
pub const TP_ABORT: f64 = 1e-6;
/// Choi eigenvalues at or below this are dropped from the Kraus list.
const KRAUS_DROP: f64 = 1e-15;

/// A quantum operation `rho -> sum_j K_j rho K_j^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
    cp_defect: f64,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_cp_defect(ops, 0.0, TP_TOL)
    }

    fn with_cp_defect(ops: Vec<ComplexMatrix>, cp_defect: f64, tp_tol: f64) -> Result<Self> {
        let Some(first) = ops.first() else {
            return Err(Error::DimensionMismatch("empty Kraus list".into()));
        };
        let dim = first.nrows();
        if ops.iter().any(|k| k.nrows() != dim || k.ncols() != dim) {
            return Err(Error::DimensionMismatch(
                "Kraus operators must be square and share a dimension".into(),
            ));
        }
        let ch = Self { dim, ops, cp_defect };
        let defect = ch.tp_defect();
        if defect > tp_tol {
            return Err(Error::NotTracePreserving { defect });
        }
        Ok(ch)
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimensionMismatch("unitary must be square".into()));
        }
        if !is_unitary(&u) {
            return Err(Error::NonUnitary {
                defect: unitary_defect(&u),
            });
        }
        Ok(Self {
            dim: u.nrows(),
            ops: vec![u],
            cp_defect: 0.0,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            ops: vec![identity(dim)],
            cp_defect: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits acted on.
    pub fn arity(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn cp_defect(&self) -> f64 {
        self.cp_defect
    }

    /// The single Kraus operator if the channel is unitary.
    pub fn as_unitary(&self) -> Option<&ComplexMatrix> {
        match self.ops.as_slice() {
            [u] if is_unitary(u) => Some(u),
            _ => None,
        }
    }

    pub fn tp_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            sum += k.adjoint() * k;
        }
        max_abs_diff(&sum, &identity(self.dim))
    }

    /// Column-stacking superoperator `sum_j conj(K_j) kron K_j`.
    pub fn superoperator(&self) -> ComplexMatrix {
        let d2 = self.dim * self.dim;
        let mut s = ComplexMatrix::zeros(d2, d2);
        for k in &self.ops {
            s += kron(&k.map(|z| z.conj()), k);
        }
        s
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(rho.nrows(), self.dim);
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.ops {
            out += k * rho * k.adjoint();
        }
        out
    }

    /// `other` after `self`.
    pub fn then(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let mut ops = Vec::with_capacity(self.ops.len() * other.ops.len());
        for b in &other.ops {
            for a in &self.ops {
                ops.push(b * a);
            }
        }
        Self::with_cp_defect(ops, self.cp_defect.max(other.cp_defect), TP_TOL)
    }

    /// Conjugate by fixed unitaries: `rho -> post (channel(pre rho pre^dagger)) post^dagger`.
    pub fn sandwich(&self, pre: &ComplexMatrix, post: &ComplexMatrix) -> Result<KrausChannel> {
        let ops = self.ops.iter().map(|k| post * k * pre).collect();
        Self::with_cp_defect(ops, self.cp_defect, TP_TOL)
    }

    /// Tensor product `self kron other`, with `self` on the leading factor.
    pub fn tensor(&self, other: &KrausChannel) -> Result<KrausChannel> {
        let mut ops = Vec::with_capacity(self.ops.len() * other.ops.len());
        for a in &self.ops {
            for b in &other.ops {
                ops.push(kron(a, b));
            }
        }
        Self::with_cp_defect(ops, self.cp_defect.max(other.cp_defect), TP_TOL)
    }

    /// Choi matrix `sum_ij |i><j| kron E(|i><j|)`.
    pub fn choi(&self) -> ComplexMatrix {
        choi_of_superoperator(&self.superoperator(), self.dim)
    }
}

fn choi_of_superoperator(s: &ComplexMatrix, dim: usize) -> ComplexMatrix {
    let d = dim;
    ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, a) = (row / d, row % d);
        let (j, b) = (col / d, col % d);
        s[(a + d * b, i + d * j)]
    })
}

/// Convert a column-stacking superoperator into Kraus form through its Choi
/// matrix. Choi eigenvalues in `[-cp_tolerance, 0)` are clipped and the most
/// negative one is kept as `cp_defect`.
pub fn kraus_from_superoperator(s: &ComplexMatrix, cp_tolerance: f64) -> Result<KrausChannel> {
    let d2 = s.nrows();
    let d = (d2 as f64).sqrt().round() as usize;
    if s.ncols() != d2 || d * d != d2 || d == 0 {
        return Err(Error::DimensionMismatch(format!(
            "superoperator must be d^2 x d^2, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let choi = choi_of_superoperator(s, d);
    let (vals, vecs) = eigh(&choi).map_err(|e| match e {
        Error::NonHermitian { max_asymmetry } => Error::DimensionMismatch(format!(
            "superoperator is not Hermiticity preserving (Choi asymmetry {max_asymmetry:e})"
        )),
        other => other,
    })?;
    let mut cp_defect: f64 = 0.0;
    let mut pairs: Vec<(f64, usize)> = Vec::new();
    for (idx, &lam) in vals.iter().enumerate() {
        if lam < -cp_tolerance {
            return Err(Error::NotCompletelyPositive {
                eigenvalue: lam,
                tolerance: cp_tolerance,
            });
        }
        if lam < 0.0 {
            cp_defect = cp_defect.max(-lam);
        } else if lam > KRAUS_DROP {
            pairs.push((lam, idx));
        }
    }
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let ops: Vec<ComplexMatrix> = pairs
        .iter()
        .map(|&(lam, idx)| {
            let scale = c(lam.sqrt(), 0.0);
            ComplexMatrix::from_fn(d, d, |a, i| vecs[(i * d + a, idx)] * scale)
        })
        .collect();
    if ops.is_empty() {
        return Err(Error::NotTracePreserving { defect: 1.0 });
    }
    KrausChannel::with_cp_defect(ops, cp_defect, TP_ABORT)
}

#[cfg(test)]
mod tests {
    use super::super::linalg::{
        cnot, hadamard, pauli_x, pauli_y, pauli_z, phase_insensitive_distance,
        unitary_superoperator,
    };
    use super::*;

    #[test]
    fn identity_superoperator_gives_identity_kraus() {
        let ch = kraus_from_superoperator(&identity(4), CP_TOL).unwrap();
        assert_eq!(ch.ops().len(), 1);
        assert!(phase_insensitive_distance(&ch.ops()[0], &identity(2)) < 1e-12);
    }

    #[test]
    fn unitary_superoperator_gives_rank_one() {
        let ch = kraus_from_superoperator(&unitary_superoperator(&cnot()), CP_TOL).unwrap();
        assert_eq!(ch.ops().len(), 1);
        assert!(phase_insensitive_distance(&ch.ops()[0], &cnot()) < 1e-12);
        let h = kraus_from_superoperator(&unitary_superoperator(&hadamard()), CP_TOL).unwrap();
        assert!(h.as_unitary().is_some());
    }

    #[test]
    fn rejects_non_cp_map() {
        // Transpose map: Choi is the swap operator with eigenvalue -1.
        let mut s = ComplexMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                s[(b + 2 * a, a + 2 * b)] = c(1.0, 0.0);
            }
        }
        match kraus_from_superoperator(&s, CP_TOL) {
            Err(Error::NotCompletelyPositive { eigenvalue, .. }) => {
                assert!((eigenvalue + 1.0).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let s = identity(4) * c(0.5, 0.0);
        assert!(matches!(
            kraus_from_superoperator(&s, CP_TOL),
            Err(Error::NotTracePreserving { .. })
        ));
        assert!(KrausChannel::new(vec![pauli_x() * c(0.9, 0.0)]).is_err());
    }

    #[test]
    fn composition_and_tensor() {
        let x = KrausChannel::unitary(pauli_x()).unwrap();
        let z = KrausChannel::unitary(pauli_z()).unwrap();
        let zx = x.then(&z).unwrap();
        // Z X = i Y
        assert!(phase_insensitive_distance(&zx.ops()[0], &pauli_y()) < 1e-14);
        let xz = x.tensor(&z).unwrap();
        assert_eq!(xz.dim(), 4);
        assert_eq!(xz.arity(), 2);
        assert!(max_abs_diff(&xz.ops()[0], &kron(&pauli_x(), &pauli_z())) < 1e-15);
    }

    #[test]
    fn superoperator_round_trip_for_mixed_channel() {
        let p = 0.3_f64;
        let ch = KrausChannel::new(vec![
            identity(2) * c((1.0 - p).sqrt(), 0.0),
            pauli_y() * c(p.sqrt(), 0.0),
        ])
        .unwrap();
        let back = kraus_from_superoperator(&ch.superoperator(), CP_TOL).unwrap();
        assert_eq!(back.ops().len(), 2);
        assert!(max_abs_diff(&back.superoperator(), &ch.superoperator()) < 1e-12);
        assert_eq!(back.cp_defect(), 0.0);
    }
}
