//! Named sweeps and their reduced smoke variants.

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub values: &'static [(&'static str, &'static str)],
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig5",
        description: "floating-gate v1, scenario I, exact",
        values: &[
            ("gate", "v1"),
            ("scenario", "I"),
            ("p_init", "0,0.002,0.07"),
            ("backend", "exact"),
        ],
    },
    Preset {
        name: "fig6",
        description: "floating-gate v2, scenario I, exact",
        values: &[
            ("gate", "v2"),
            ("scenario", "I"),
            ("p_init", "0,0.007,0.014"),
            ("backend", "exact"),
        ],
    },
    Preset {
        name: "fig7",
        description: "exchange gate, scenario I, exact",
        values: &[
            ("gate", "ldiv"),
            ("scenario", "I"),
            ("p_init", "0,0.003,0.007"),
            ("backend", "exact"),
        ],
    },
    Preset {
        name: "fig8",
        description: "floating-gate v1, scenario II, 2e5 trajectories",
        values: &[
            ("gate", "v1"),
            ("scenario", "II"),
            ("p_init", "0,0.002,0.07"),
            ("backend", "trajectory"),
            ("n_samples", "200000"),
        ],
    },
    Preset {
        name: "fig9",
        description: "floating-gate v2, scenario II, 2e5 trajectories",
        values: &[
            ("gate", "v2"),
            ("scenario", "II"),
            ("p_init", "0,0.007,0.014"),
            ("backend", "trajectory"),
            ("n_samples", "200000"),
        ],
    },
    Preset {
        name: "fig10",
        description: "exchange gate, scenario II, 2e5 trajectories",
        values: &[
            ("gate", "ldiv"),
            ("scenario", "II"),
            ("p_init", "0,0.003,0.007"),
            ("backend", "trajectory"),
            ("n_samples", "200000"),
        ],
    },
    Preset {
        name: "fig11",
        description: "exchange gate with and without K2, scenario I, exact",
        values: &[
            ("gate", "ldiv,ldiv_no_k2"),
            ("scenario", "I"),
            ("p_init", "0"),
            ("backend", "exact"),
        ],
    },
    Preset {
        name: "fig8-smoke",
        description: "fig8 on an 8x8 grid with 5e4 trajectories",
        values: &[
            ("gate", "v1"),
            ("scenario", "II"),
            ("p_init", "0,0.002,0.07"),
            ("backend", "trajectory"),
            ("n_samples", "50000"),
            ("grid", "8x8"),
        ],
    },
    Preset {
        name: "fig9-smoke",
        description: "fig9 on an 8x8 grid with 5e4 trajectories",
        values: &[
            ("gate", "v2"),
            ("scenario", "II"),
            ("p_init", "0,0.007,0.014"),
            ("backend", "trajectory"),
            ("n_samples", "50000"),
            ("grid", "8x8"),
        ],
    },
    Preset {
        name: "fig10-smoke",
        description: "fig10 on an 8x8 grid with 5e4 trajectories",
        values: &[
            ("gate", "ldiv"),
            ("scenario", "II"),
            ("p_init", "0,0.003,0.007"),
            ("backend", "trajectory"),
            ("n_samples", "50000"),
            ("grid", "8x8"),
        ],
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::config::{Layers, Origin, SweepConfig};

    #[test]
    fn every_preset_is_valid() {
        for p in PRESETS {
            let mut l = Layers::new();
            l.apply_preset(p.name, &Origin::Flag("preset".into())).unwrap();
            let cfg = SweepConfig::from_layers(&l).unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert_eq!(cfg.grid.0 * cfg.grid.1 > 0, true);
        }
    }

    #[test]
    fn fig11_runs_both_exchange_variants() {
        let mut l = Layers::new();
        l.apply_preset("fig11", &Origin::Default).unwrap();
        let cfg = SweepConfig::from_layers(&l).unwrap();
        assert_eq!(cfg.gates.len(), 2);
    }
}
