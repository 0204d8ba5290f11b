//! Versioned CSV and JSON serialization of benchmark records.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::decoder::BenchmarkRecord;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 14] = [
    "schema_version",
    "gate",
    "scenario",
    "param1_name",
    "param1",
    "param2_name",
    "param2",
    "p_init",
    "infidelity",
    "p_code",
    "p_code_stderr",
    "backend",
    "n_samples",
    "seed",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(records: &[BenchmarkRecord]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{SCHEMA_VERSION},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.gate,
            r.scenario,
            r.param1_name,
            format_float(r.param1),
            r.param2_name,
            format_float(r.param2),
            format_float(r.p_init),
            format_float(r.infidelity),
            format_float(r.p_code),
            format_float(r.p_code_stderr),
            r.backend,
            r.n_samples,
            r.seed
        )
        .expect("writing to a String");
    }
    out
}

/// Parse a CSV produced by [`to_csv`].
pub fn from_csv(text: &str) -> Result<Vec<BenchmarkRecord>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Config("empty CSV".into()))?;
    if header != CSV_COLUMNS.join(",") {
        return Err(Error::Config(format!("unexpected CSV header `{header}`")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let bad = |what: &str| Error::Config(format!("CSV line {}: {what}", i + 2));
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != CSV_COLUMNS.len() {
            return Err(bad("wrong number of columns"));
        }
        if f[0] != SCHEMA_VERSION.to_string() {
            return Err(bad("unsupported schema_version"));
        }
        let num = |j: usize| f[j].parse::<f64>().map_err(|_| bad(CSV_COLUMNS[j]));
        let int = |j: usize| f[j].parse::<u64>().map_err(|_| bad(CSV_COLUMNS[j]));
        out.push(BenchmarkRecord {
            gate: f[1].to_string(),
            scenario: f[2].to_string(),
            param1_name: f[3].to_string(),
            param1: num(4)?,
            param2_name: f[5].to_string(),
            param2: num(6)?,
            p_init: num(7)?,
            infidelity: num(8)?,
            p_code: num(9)?,
            p_code_stderr: num(10)?,
            backend: f[11].to_string(),
            n_samples: int(12)?,
            seed: int(13)?,
        });
    }
    Ok(out)
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    schema_version: u32,
    records: &'a [BenchmarkRecord],
}

pub fn to_json(records: &[BenchmarkRecord]) -> String {
    let doc = JsonDoc {
        schema_version: SCHEMA_VERSION,
        records,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("records serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn min_median_max(mut v: Vec<f64>) -> (f64, f64, f64) {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    };
    (v[0], median, v[n - 1])
}

/// One line per `(gate, p_init)` series, in first-appearance order.
pub fn summary_lines(records: &[BenchmarkRecord]) -> Vec<String> {
    let mut keys: Vec<(&str, f64)> = Vec::new();
    for r in records {
        if !keys.iter().any(|&(g, p)| g == r.gate && p == r.p_init) {
            keys.push((&r.gate, r.p_init));
        }
    }
    keys.into_iter()
        .map(|(gate, p)| {
            let series: Vec<&BenchmarkRecord> = records
                .iter()
                .filter(|r| r.gate == gate && r.p_init == p)
                .collect();
            let (c0, c1, c2) = min_median_max(series.iter().map(|r| r.p_code).collect());
            let (i0, i1, i2) = min_median_max(series.iter().map(|r| r.infidelity).collect());
            format!(
                "{gate} p_init={p} points={} p_code min/median/max={c0:.3e}/{c1:.3e}/{c2:.3e} \
                 infidelity min/median/max={i0:.3e}/{i1:.3e}/{i2:.3e}",
                series.len()
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(p_code: f64) -> BenchmarkRecord {
        BenchmarkRecord {
            gate: "v1".into(),
            scenario: "I".into(),
            param1_name: "R".into(),
            param1: 30.15625,
            param2_name: "gamma_ratio".into(),
            param2: 0.1,
            p_init: 0.002,
            infidelity: 1.0 / 3.0,
            p_code,
            p_code_stderr: 0.0,
            backend: "exact".into(),
            n_samples: 0,
            seed: 7,
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let recs = vec![record(std::f64::consts::PI * 1e-7), record(0.1 + 0.2)];
        let text = to_csv(&recs);
        assert!(text.starts_with("schema_version,gate,scenario,param1_name,param1,"));
        assert_eq!(from_csv(&text).unwrap(), recs);
    }

    #[test]
    fn header_mismatch_is_rejected() {
        assert!(from_csv("a,b\n").is_err());
    }

    #[test]
    fn summary() {
        let recs = vec![record(1.0), record(3.0), record(2.0)];
        let lines = summary_lines(&recs);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].contains("p_code min/median/max=1.000e0/2.000e0/3.000e0"), "{}", lines[0]);
    }

    #[test]
    fn json_has_version() {
        let v: serde_json::Value = serde_json::from_str(&to_json(&[record(0.5)])).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["records"][0]["p_code"], 0.5);
    }
}
