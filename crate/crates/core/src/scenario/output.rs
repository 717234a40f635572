use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::classical::PhasePoint;
use crate::error::{Error, Result};
use crate::su::QuantumOperator;

/// One emitted file, held in memory until the caller writes it.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Result<Self> {
        let mut contents = serde_json::to_string_pretty(value)?;
        contents.push('\n');
        Ok(Self {
            name: name.into(),
            contents,
        })
    }
}

/// Assertion-style check; any failure maps to exit status 2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOutput {
    pub files: Vec<Artifact>,
    pub checks: Vec<Check>,
    /// Informational lines such as skipped singular points.
    pub notes: Vec<String>,
}

impl RunOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Row-oriented CSV builder over the `csv` writer.
pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(header.iter().map(|h| h.as_ref()))
            .map_err(csv_err)?;
        Ok(Self { writer })
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) -> Result<()> {
        self.writer
            .write_record(fields.iter().map(|f| f.as_ref()))
            .map_err(csv_err)
    }

    pub fn finish(self, name: impl Into<String>) -> Result<Artifact> {
        let bytes = self.writer.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(Artifact {
            name: name.into(),
            contents: String::from_utf8(bytes).expect("csv output is utf-8"),
        })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Shortest round-trip formatting, scientific outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn coord_header(n_c: usize) -> Vec<String> {
    let mut h: Vec<String> = (1..=n_c).map(|i| format!("x{i}")).collect();
    h.extend((1..=n_c).map(|i| format!("k{i}")));
    h
}

pub fn coords(p: &PhasePoint) -> Vec<String> {
    p.x.iter().chain(&p.k).map(|&v| num(v)).collect()
}

/// `t, point_id, x.., k.., re(m11), im(m11), ...` in row-major order.
pub fn trajectory_header(n_c: usize, n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string(), "point_id".to_string()];
    h.extend(coord_header(n_c));
    for r in 1..=n {
        for c in 1..=n {
            h.push(format!("re(m{r}{c})"));
            h.push(format!("im(m{r}{c})"));
        }
    }
    h
}

pub fn trajectory_row(t: f64, id: usize, p: &PhasePoint, m: &QuantumOperator) -> Vec<String> {
    let mut row = vec![num(t), id.to_string()];
    row.extend(coords(p));
    for r in 0..m.n() {
        for c in 0..m.n() {
            let z = m.get(r, c);
            row.push(num(z.re));
            row.push(num(z.im));
        }
    }
    row
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManifestEntry {
    pub path: String,
    pub subcommand: String,
    pub sha256: String,
}

/// Index of everything a run emitted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub scenario: String,
    pub subcommand: String,
    pub config_sha256: String,
    pub seed: Option<u64>,
    pub files: Vec<ManifestEntry>,
    pub checks: Vec<Check>,
}

impl Manifest {
    pub fn new(scenario: &str, subcommand: &str, config_text: &str, seed: Option<u64>, out: &RunOutput) -> Self {
        Self {
            scenario: scenario.into(),
            subcommand: subcommand.into(),
            config_sha256: sha256_hex(config_text.as_bytes()),
            seed,
            files: out
                .files
                .iter()
                .map(|f| ManifestEntry {
                    path: f.name.clone(),
                    subcommand: subcommand.into(),
                    sha256: sha256_hex(f.contents.as_bytes()),
                })
                .collect(),
            checks: out.checks.clone(),
        }
    }
}
