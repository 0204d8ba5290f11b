#![allow(dead_code)]

pub mod pauli_oracle;

use s17bench::channel::linalg::cnot;
use s17bench::channel::KrausChannel;
use s17bench::code::Scenario;
use s17bench::sim::RunConfig;

pub fn ideal_config(scenario: Scenario, p_init: f64) -> RunConfig {
    let mut cfg = RunConfig::new(scenario, KrausChannel::unitary(cnot()).unwrap());
    cfg.p_init = p_init;
    cfg
}
