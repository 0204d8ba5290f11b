//! Python bindings: gate construction, noise channels, single-point runs and
//! full sweeps. Matrices cross the boundary as nested lists of complex numbers.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use s17bench::channel::{ComplexMatrix, KrausChannel};
use s17bench::code::{Scenario, Serialization};
use s17bench::decoder::{run_benchmark, BenchOptions, BenchmarkRecord};
use s17bench::gates::{FloatingGateParams, GateSpec, LdivParams, Variant};
use s17bench::noise::{noise_channel, NoiseKind};
use s17bench::sim::{run, Backend, RunConfig, DEFAULT_MAX_WIDTH};
use s17bench::sweep::{self, presets, Layers, Origin, SweepConfig, DEFAULT_DELTA};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn gate_spec(gate: &str, param1: Option<f64>, param2: Option<f64>, delta: f64) -> PyResult<GateSpec> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| PyValueError::new_err(format!("gate `{gate}` needs {name}")))
    };
    Ok(match gate {
        "ideal" => GateSpec::Ideal,
        "v1" | "v2" => GateSpec::Floating(FloatingGateParams {
            r: need(param1, "param1 (R)")?,
            gamma_ratio: need(param2, "param2 (gamma_ratio)")?,
            variant: if gate == "v1" { Variant::V1 } else { Variant::V2 },
        }),
        "ldiv" | "ldiv_no_k2" => GateSpec::Ldiv(LdivParams {
            t: need(param1, "param1 (t)")?,
            gamma: need(param2, "param2 (Gamma)")?,
            delta,
            include_k2: gate == "ldiv",
        }),
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown gate `{gate}`; expected ideal, v1, v2, ldiv or ldiv_no_k2"
            )))
        }
    })
}

fn scenario(s: &str) -> PyResult<Scenario> {
    match s {
        "I" => Ok(Scenario::I),
        "II" => Ok(Scenario::II),
        _ => Err(PyValueError::new_err(format!("scenario must be I or II, got `{s}`"))),
    }
}

fn backend(s: &str) -> PyResult<Backend> {
    match s {
        "exact" => Ok(Backend::ExactDm),
        "trajectory" => Ok(Backend::Trajectory),
        _ => Err(PyValueError::new_err(format!("backend must be exact or trajectory, got `{s}`"))),
    }
}

fn serialization(s: &str) -> PyResult<Serialization> {
    match s {
        "concurrent" => Ok(Serialization::Concurrent),
        "serialized" => Ok(Serialization::Serialized),
        _ => Err(PyValueError::new_err(format!(
            "serialization must be concurrent or serialized, got `{s}`"
        ))),
    }
}

fn to_lists(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn kraus_lists(ch: &KrausChannel) -> Vec<Vec<Vec<Complex64>>> {
    ch.ops().iter().map(to_lists).collect()
}

/// One benchmark point.
#[pyclass(get_all, frozen, module = "s17bench_py")]
pub struct Record {
    gate: String,
    scenario: String,
    param1_name: String,
    param1: f64,
    param2_name: String,
    param2: f64,
    p_init: f64,
    infidelity: f64,
    p_code: f64,
    p_code_stderr: f64,
    backend: String,
    n_samples: u64,
    seed: u64,
}

impl From<BenchmarkRecord> for Record {
    fn from(r: BenchmarkRecord) -> Self {
        Self {
            gate: r.gate,
            scenario: r.scenario,
            param1_name: r.param1_name,
            param1: r.param1,
            param2_name: r.param2_name,
            param2: r.param2,
            p_init: r.p_init,
            infidelity: r.infidelity,
            p_code: r.p_code,
            p_code_stderr: r.p_code_stderr,
            backend: r.backend,
            n_samples: r.n_samples,
            seed: r.seed,
        }
    }
}

#[pymethods]
impl Record {
    fn __repr__(&self) -> String {
        format!(
            "Record(gate={:?}, {}={}, {}={}, p_init={}, infidelity={:e}, p_code={:e})",
            self.gate,
            self.param1_name,
            self.param1,
            self.param2_name,
            self.param2,
            self.p_init,
            self.infidelity,
            self.p_code
        )
    }
}

fn settings_layers(settings: &BTreeMap<String, String>) -> PyResult<Layers> {
    let mut layers = Layers::new();
    if let Some(name) = settings.get("preset") {
        layers
            .apply_preset(name, &Origin::Flag("preset".into()))
            .map_err(value_error)?;
    }
    for (k, v) in settings {
        if k != "preset" {
            layers.set(k, v, Origin::Flag(k.clone())).map_err(value_error)?;
        }
    }
    Ok(layers)
}

/// Worst-case infidelity against the ideal CNOT over product Pauli eigenstates.
#[pyfunction]
#[pyo3(signature = (gate, param1=None, param2=None, delta=DEFAULT_DELTA))]
fn gate_infidelity(gate: &str, param1: Option<f64>, param2: Option<f64>, delta: f64) -> PyResult<f64> {
    gate_spec(gate, param1, param2, delta)?
        .infidelity()
        .map_err(value_error)
}

/// Kraus operators of a CNOT implementation, each a 4x4 nested list.
#[pyfunction]
#[pyo3(signature = (gate, param1=None, param2=None, delta=DEFAULT_DELTA))]
fn cnot_kraus(
    gate: &str,
    param1: Option<f64>,
    param2: Option<f64>,
    delta: f64,
) -> PyResult<Vec<Vec<Vec<Complex64>>>> {
    let ch = gate_spec(gate, param1, param2, delta)?
        .channel()
        .map_err(value_error)?;
    Ok(kraus_lists(&ch))
}

/// Kraus operators of `bit_flip`, `phase_flip` or `depolarizing` noise.
#[pyfunction]
fn noise_kraus(kind: &str, p: f64) -> PyResult<Vec<Vec<Vec<Complex64>>>> {
    let k = match kind {
        "bit_flip" => NoiseKind::BitFlip(p),
        "phase_flip" => NoiseKind::PhaseFlip(p),
        "depolarizing" => NoiseKind::Depolarizing(p),
        _ => return Err(PyValueError::new_err(format!("unknown noise kind `{kind}`"))),
    };
    Ok(kraus_lists(&noise_channel(k).map_err(value_error)?))
}

/// Outcome distribution over 9-bit keys for one encoded state.
#[pyfunction]
#[pyo3(signature = (
    scenario, gate, param1=None, param2=None, p_init=0.0, encoded=0, backend="exact",
    n_samples=0, seed=0, serialization="concurrent", delta=DEFAULT_DELTA
))]
#[allow(clippy::too_many_arguments)]
fn syndrome_distribution(
    py: Python<'_>,
    scenario: &str,
    gate: &str,
    param1: Option<f64>,
    param2: Option<f64>,
    p_init: f64,
    encoded: u8,
    backend: &str,
    n_samples: u64,
    seed: u64,
    serialization: &str,
    delta: f64,
) -> PyResult<BTreeMap<u16, f64>> {
    let channel = gate_spec(gate, param1, param2, delta)?
        .channel()
        .map_err(value_error)?;
    let mut cfg = RunConfig::new(self::scenario(scenario)?, channel);
    cfg.p_init = p_init;
    cfg.encoded = encoded;
    cfg.backend = self::backend(backend)?;
    cfg.n_samples = n_samples;
    cfg.seed = seed;
    cfg.serialization = self::serialization(serialization)?;
    let dist = py.detach(|| run(&cfg)).map_err(value_error)?;
    Ok(dist.probabilities)
}

/// Benchmark a single gate: infidelity, `p_code` and its uncertainty.
#[pyfunction]
#[pyo3(signature = (
    scenario, gate, param1=None, param2=None, p_init=0.0, backend="exact",
    n_samples=0, seed=0, serialization="concurrent", delta=DEFAULT_DELTA
))]
#[allow(clippy::too_many_arguments)]
fn benchmark_point(
    py: Python<'_>,
    scenario: &str,
    gate: &str,
    param1: Option<f64>,
    param2: Option<f64>,
    p_init: f64,
    backend: &str,
    n_samples: u64,
    seed: u64,
    serialization: &str,
    delta: f64,
) -> PyResult<Record> {
    let spec = gate_spec(gate, param1, param2, delta)?;
    let opts = BenchOptions {
        backend: self::backend(backend)?,
        n_samples,
        seed,
        serialization: self::serialization(serialization)?,
        max_width: DEFAULT_MAX_WIDTH,
    };
    let sc = self::scenario(scenario)?;
    let mut recs = py
        .detach(|| run_benchmark(&[spec], sc, &[p_init], &opts))
        .map_err(value_error)?;
    Ok(recs.remove(0).into())
}

/// Run a sweep described by CLI-style settings, e.g.
/// `{"preset": "fig5", "grid": "4x4"}`. Returns the records in file order.
#[pyfunction]
fn run_sweep(py: Python<'_>, settings: BTreeMap<String, String>) -> PyResult<Vec<Record>> {
    let cfg = SweepConfig::from_layers(&settings_layers(&settings)?).map_err(value_error)?;
    let recs = py
        .detach(|| sweep::run_sweep_pooled(&cfg))
        .map_err(value_error)?;
    Ok(recs.into_iter().map(Record::from).collect())
}

/// As `run_sweep`, returning the versioned CSV text.
#[pyfunction]
fn sweep_csv(py: Python<'_>, settings: BTreeMap<String, String>) -> PyResult<String> {
    let cfg = SweepConfig::from_layers(&settings_layers(&settings)?).map_err(value_error)?;
    let recs = py
        .detach(|| sweep::run_sweep_pooled(&cfg))
        .map_err(value_error)?;
    Ok(sweep::to_csv(&recs))
}

/// `(name, description)` of every embedded preset.
#[pyfunction]
fn preset_names() -> Vec<(&'static str, &'static str)> {
    presets::PRESETS.iter().map(|p| (p.name, p.description)).collect()
}

#[pymodule]
mod s17bench_py {
    #[pymodule_export]
    use super::{
        benchmark_point, cnot_kraus, gate_infidelity, noise_kraus, preset_names, run_sweep,
        sweep_csv, syndrome_distribution, Record,
    };

    #[pymodule_export]
    const CSV_COLUMNS: [&str; 14] = s17bench::sweep::CSV_COLUMNS;

    #[pymodule_export]
    const SCHEMA_VERSION: u32 = s17bench::sweep::SCHEMA_VERSION;
}
