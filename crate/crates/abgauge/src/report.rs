//! Reports: every number travels with the tolerance it was judged against and
//! the operation that produced it.
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{create, Triple};
use crate::scenario::ScenarioKind;

pub const REPORT_SCHEMA: &str = "abgauge-report/1";

/// A reported quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tagged<T> {
    pub value: T,
    pub tolerance: f64,
    pub op: String,
}

pub fn tagged<T>(value: T, tolerance: f64, op: &str) -> Tagged<T> {
    Tagged {
        value,
        tolerance,
        op: op.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    Ambiguous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub status: Status,
    pub numbers: BTreeMap<String, Tagged<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Stage {
    pub fn new(name: &str) -> Self {
        Stage {
            name: name.to_string(),
            status: Status::Passed,
            numbers: BTreeMap::new(),
            note: None,
        }
    }

    /// Records `value` and fails the stage unless `value <= tolerance`.
    pub fn check(&mut self, key: &str, value: f64, tolerance: f64, op: &str) -> bool {
        let ok = value <= tolerance;
        if !ok {
            self.status = Status::Failed;
        }
        self.numbers
            .insert(key.to_string(), tagged(value, tolerance, op));
        ok
    }

    /// Records `value` without judging it.
    pub fn record(&mut self, key: &str, value: f64, tolerance: f64, op: &str) {
        self.numbers
            .insert(key.to_string(), tagged(value, tolerance, op));
    }

    pub fn fail(&mut self, note: impl Into<String>) {
        self.status = Status::Failed;
        self.note = Some(note.into());
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }
}

/// Recovered gauge `(m, phi or psi, L1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeReport {
    pub m: Tagged<i64>,
    /// Planar phase as Fourier triples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Tagged<Vec<Triple>>>,
    /// Spatial phase as node samples `[w1, w2, w3, value]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Tagged<Vec<[f64; 4]>>>,
    /// Table holding `L1` on a grid, if a short-range gauge was found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1_table: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1_max_abs: Option<Tagged<f64>>,
}

/// Evidence behind a `not_equivalent` verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessReport {
    /// Flux invariants of the kernels differ at channel `k`.
    Channel {
        k: i64,
        first: [f64; 2],
        second: [f64; 2],
    },
    /// Kernels differ at a grid point after the best gauge.
    Kernel {
        at: Vec<f64>,
        difference: Tagged<f64>,
    },
    /// Long-range parts differ after removing the recovered gauge.
    Transversal {
        quantity: String,
        difference: Tagged<f64>,
    },
    /// The short-range difference is not a gradient.
    MagneticField { reason: String, defect: Tagged<f64> },
    /// Scalar X-ray transforms differ on a line.
    ScalarTransform {
        x0: [f64; 3],
        omega: [f64; 3],
        first: f64,
        second: f64,
        difference: Tagged<f64>,
    },
}

/// A plain table emitted as CSV next to the JSON report.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|v| {
                if v.is_nan() {
                    String::new()
                } else {
                    v.to_string()
                }
            }))?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ScenarioKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub seed: u64,
    pub verdict: Option<Verdict>,
    pub caveats: Vec<String>,
    /// Where the inputs of the verdict came from.
    pub provenance: Vec<String>,
    pub regime: String,
    /// Flux of each configuration.
    pub alpha: Vec<Tagged<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    pub stages: Vec<Stage>,
    /// Reconstruction metrics.
    pub metrics: BTreeMap<String, Tagged<f64>>,
    /// CSV files written with the report.
    pub tables: Vec<String>,
    #[serde(skip)]
    pub data: Vec<Table>,
}

impl Default for Report {
    fn default() -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            kind: None,
            name: None,
            seed: 0,
            verdict: None,
            caveats: Vec::new(),
            provenance: Vec::new(),
            regime: String::new(),
            alpha: Vec::new(),
            gauge: None,
            witness: None,
            stages: Vec::new(),
            metrics: BTreeMap::new(),
            tables: Vec::new(),
            data: Vec::new(),
        }
    }
}

impl Report {
    pub fn add_table(&mut self, table: Table) {
        self.tables.push(table.file_name());
        self.data.push(table);
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// Process exit code: 0 verdict reached, 2 ambiguous.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(Verdict::Ambiguous) => 2,
            _ => 0,
        }
    }
}

/// Output format of [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportFormat {
    /// `report.json` only.
    Json,
    /// `report.json` plus one CSV per table.
    #[default]
    JsonAndCsv,
}

/// Writes the report into `dir`; returns the files written.
pub fn emit_report(report: &Report, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let json = dir.join("report.json");
    let mut shown = report.clone();
    if format == ReportFormat::Json {
        shown.tables.clear();
    }
    crate::io::write_json(&json, &shown)?;
    written.push(json);
    if format == ReportFormat::JsonAndCsv {
        for t in &report.data {
            let path = dir.join(t.file_name());
            let mut w = create(&path)?;
            t.write(&mut w)?;
            w.flush().map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}
