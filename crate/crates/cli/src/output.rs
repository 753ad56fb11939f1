//! Result documents: long-format CSV with a manifest comment line, or nested JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use dissension_core::dissension::SubsetParams;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::manifest::{Format, RunManifest, CSV_MANIFEST_PREFIX};

/// One evaluated quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub state: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub param: Option<f64>,
    /// e.g. `total_correlation`, `dissension.m1.t2`.
    pub measure: String,
    /// Anchor party, absent for symmetric or scalar quantities.
    pub anchor: Option<String>,
    pub value: f64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub argmin: Vec<SubsetParams>,
}

/// Fixed ten decimals, with negative zero printed as zero.
pub fn fmt_value(v: f64) -> String {
    let s = format!("{v:.10}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// `xy=[a b c];z=[d e]` with six decimals.
pub fn fmt_argmin(argmin: &[SubsetParams]) -> String {
    argmin
        .iter()
        .map(|sp| {
            let ps: Vec<String> = sp.params.0.iter().map(|p| format!("{p:.6}")).collect();
            format!("{}=[{}]", sp.subset.concat(), ps.join(" "))
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// A table body: header plus string rows.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Renders a complete document; `json_body` supplies the JSON payload under `key`.
pub fn render<T: Serialize>(manifest: &RunManifest, table: &Table, key: &str, json_body: &T) -> Result<String> {
    match manifest.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            let body = String::from_utf8(bytes).expect("csv output is utf-8");
            Ok(format!("{CSV_MANIFEST_PREFIX}{}\n{body}", manifest.to_compact_json()))
        }
        Format::Json => {
            let doc = serde_json::json!({ "manifest": manifest, key: json_body });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
    }
}

/// Writes to `out` plus a `<out>.manifest.json` sidecar, or to stdout.
pub fn emit(doc: &str, manifest: &RunManifest, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, doc)?;
            fs::write(sidecar(path), serde_json::to_string_pretty(manifest)? + "\n")?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(doc.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

pub fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// CSV layout for `compute`.
pub fn compute_table(records: &[Record]) -> Table {
    Table {
        header: vec!["state", "measure", "anchor", "value", "converged", "argmin"],
        rows: records
            .iter()
            .map(|r| {
                vec![
                    r.state.clone(),
                    r.measure.clone(),
                    r.anchor.clone().unwrap_or_default(),
                    fmt_value(r.value),
                    r.converged.to_string(),
                    fmt_argmin(&r.argmin),
                ]
            })
            .collect(),
    }
}

/// CSV layout for `sweep`.
pub fn sweep_table(records: &[Record]) -> Table {
    Table {
        header: vec!["param", "measure", "anchor", "value", "converged"],
        rows: records
            .iter()
            .map(|r| {
                vec![
                    r.param.map(fmt_value).unwrap_or_default(),
                    r.measure.clone(),
                    r.anchor.clone().unwrap_or_default(),
                    fmt_value(r.value),
                    r.converged.to_string(),
                ]
            })
            .collect(),
    }
}
