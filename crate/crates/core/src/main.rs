use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use s17bench::code::build_schedule;
use s17bench::sweep::{
    self, output, presets, ConfigError, Layers, Origin, SweepConfig, THREADS_ENV,
};

/// Sweep approximate CNOT gates through surface-17 syndrome extraction and
/// record gate infidelity against the decoded logical error probability.
///
/// Settings are layered: the S17BENCH_THREADS environment variable, then
/// --preset, then --config, then individual flags.
#[derive(Parser, Debug)]
#[command(name = "s17bench", version)]
struct Cli {
    /// Named sweep (see --list-presets).
    #[arg(long)]
    preset: Option<String>,
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ideal, v1, v2, ldiv or ldiv_no_k2; comma-separated for several series.
    #[arg(long)]
    gate: Option<String>,
    /// I or II.
    #[arg(long)]
    scenario: Option<String>,
    /// Cells per parameter, `NxM`.
    #[arg(long)]
    grid: Option<String>,
    /// `lo,hi` for R (floating gates) or t (exchange gates).
    #[arg(long)]
    param1_range: Option<String>,
    /// `lo,hi` for gamma_ratio (floating gates) or Gamma (exchange gates).
    #[arg(long)]
    param2_range: Option<String>,
    /// Phase shift of the exchange gates.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Comma-separated depolarizing strengths.
    #[arg(long)]
    p_init: Option<String>,
    /// exact or trajectory.
    #[arg(long)]
    backend: Option<String>,
    /// Trajectories per encoded state.
    #[arg(long)]
    n_samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// concurrent or serialized.
    #[arg(long)]
    serialization: Option<String>,
    /// Largest register the exact backend may hold.
    #[arg(long)]
    max_width: Option<String>,
    /// CSV output path.
    #[arg(long, short)]
    output: Option<String>,
    /// Optional JSON output path.
    #[arg(long)]
    json: Option<String>,
    /// Worker threads (default: S17BENCH_THREADS, else all cores).
    #[arg(long)]
    threads: Option<String>,
    /// Permit parameter ranges outside the studied domain.
    #[arg(long)]
    allow_out_of_domain: bool,
    /// Print the presets and exit.
    #[arg(long)]
    list_presets: bool,
    /// Print the extraction schedule of the configured scenario and exit.
    #[arg(long)]
    dump_schedule: bool,
}

impl Cli {
    fn layers(&self) -> Result<Layers, ConfigError> {
        let mut layers = Layers::new();
        if let Ok(v) = std::env::var(THREADS_ENV) {
            layers.set("threads", &v, Origin::Env(THREADS_ENV))?;
        }
        let file = match &self.config {
            Some(path) => Some(Layers::read_file(path)?),
            None => None,
        };
        let preset = match (&self.preset, file.as_ref().and_then(|f| f.get("preset"))) {
            (Some(p), _) => Some((p.clone(), Origin::Flag("preset".into()))),
            (None, Some((p, o))) => Some((p.to_string(), o.clone())),
            (None, None) => None,
        };
        if let Some((name, origin)) = preset {
            layers.apply_preset(&name, &origin)?;
        }
        if let Some(f) = file {
            layers.merge(f);
        }
        let flags = [
            ("gate", &self.gate),
            ("scenario", &self.scenario),
            ("grid", &self.grid),
            ("param1_range", &self.param1_range),
            ("param2_range", &self.param2_range),
            ("delta", &self.delta),
            ("p_init", &self.p_init),
            ("backend", &self.backend),
            ("n_samples", &self.n_samples),
            ("seed", &self.seed),
            ("serialization", &self.serialization),
            ("max_width", &self.max_width),
            ("output", &self.output),
            ("json", &self.json),
            ("threads", &self.threads),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                layers.set(key, v, Origin::Flag(key.replace('_', "-")))?;
            }
        }
        if self.allow_out_of_domain {
            layers.set("allow_out_of_domain", "true", Origin::Flag("allow-out-of-domain".into()))?;
        }
        Ok(layers)
    }
}

fn dump_schedule(layers: &Layers) -> Result<(), ConfigError> {
    // Only the scenario and serialization matter here, so no gate is needed.
    let mut probe = layers.clone();
    if probe.get("gate").is_none() {
        probe.set("gate", "ideal", Origin::Default)?;
    }
    let cfg = SweepConfig::from_layers(&probe)?;
    print!("{}", build_schedule(cfg.scenario, cfg.serialization).dump());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_presets {
        for p in presets::PRESETS {
            println!("{:<12} {}", p.name, p.description);
        }
        return ExitCode::SUCCESS;
    }
    let layers = match cli.layers() {
        Ok(l) => l,
        Err(e) => return config_failure(&e),
    };
    if cli.dump_schedule {
        return match dump_schedule(&layers) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => config_failure(&e),
        };
    }
    let cfg = match SweepConfig::from_layers(&layers) {
        Ok(c) => c,
        Err(e) => return config_failure(&e),
    };

    let records = match sweep::run_sweep_pooled(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: simulation failed: {e}");
            return ExitCode::from(1);
        }
    };
    let mut writes = vec![(cfg.output.clone(), output::to_csv(&records))];
    if let Some(path) = &cfg.json {
        writes.push((path.clone(), output::to_json(&records)));
    }
    for (path, text) in writes {
        if let Err(e) = output::write_file(&path, &text) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    for line in output::summary_lines(&records) {
        println!("{line}");
    }
    println!("wrote {} records to {}", records.len(), cfg.output.display());
    ExitCode::SUCCESS
}

fn config_failure(e: &ConfigError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}
