//! Run manifests: everything needed to repeat a run byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use dissension_core::qformalism::StateJson;
use dissension_core::states::{self, StateRecipe};
use dissension_core::{BasisFamily, DensityOperator, OptimizerConfig, Track};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Prefix of the first CSV line, followed by the compact manifest JSON.
pub const CSV_MANIFEST_PREFIX: &str = "# manifest: ";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    InteractionInfo,
    TotalCorrelation,
    BindingInfo,
    DiscordVector,
    Dissension,
    AverageDissension,
    /// Every measure defined for the state.
    All,
}

impl Measure {
    const CONCRETE: [Measure; 6] = [
        Measure::InteractionInfo,
        Measure::TotalCorrelation,
        Measure::BindingInfo,
        Measure::DiscordVector,
        Measure::Dissension,
        Measure::AverageDissension,
    ];

    /// Sorted, deduplicated list with `All` expanded. An empty request means `All`.
    pub fn expand(requested: &[Measure]) -> Vec<Measure> {
        if requested.is_empty() || requested.contains(&Measure::All) {
            return Measure::CONCRETE.to_vec();
        }
        let mut out = requested.to_vec();
        out.sort();
        out.dedup();
        out
    }
}

/// Where the density operator comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateSource {
    Catalog(StateRecipe),
    /// A JSON matrix file, embedded so replays do not depend on the file.
    File { path: String, state: StateJson },
}

impl StateSource {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = read(path)?;
        let state: StateJson = serde_json::from_str(&text)?;
        Ok(StateSource::File { path: path.display().to_string(), state })
    }

    pub fn build(&self) -> Result<DensityOperator> {
        Ok(match self {
            StateSource::Catalog(recipe) => states::build(recipe)?,
            StateSource::File { state, .. } => DensityOperator::from_json(state)?,
        })
    }

    /// Short name for output rows: the catalog name or the file path.
    pub fn label(&self) -> String {
        match self {
            StateSource::Catalog(recipe) => recipe.name.clone(),
            StateSource::File { path, .. } => path.clone(),
        }
    }
}

/// Which quantities to evaluate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub measures: Vec<Measure>,
    /// Measured-party count; every valid one when absent.
    pub m: Option<usize>,
    /// Both tracks when absent.
    pub track: Option<Track>,
    #[serde(default)]
    pub family: BasisFamily,
    /// Cross-check each small objective against the grid oracle.
    #[serde(default)]
    pub grid: bool,
}

impl Selection {
    /// `(m, track)` pairs for an `n`-qubit state, in ascending order.
    pub fn orders(&self, n: usize) -> Vec<(usize, Track)> {
        let ms: Vec<usize> = match self.m {
            Some(m) => vec![m],
            None => (1..n).collect(),
        };
        let tracks = match self.track {
            Some(t) => vec![t],
            None => vec![Track::One, Track::Two],
        };
        ms.iter().flat_map(|&m| tracks.iter().map(move |&t| (m, t))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Task {
    Compute {
        state: StateSource,
        selection: Selection,
    },
    Sweep {
        state: StateSource,
        parameter: String,
        values: Vec<f64>,
        selection: Selection,
    },
    Reproduce {
        table: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    #[serde(flatten)]
    pub task: Task,
    pub optimizer: OptimizerConfig,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunManifest {
    pub fn new(task: Task, optimizer: OptimizerConfig, format: Format, output: Option<PathBuf>) -> Self {
        RunManifest { tool_version: TOOL_VERSION.to_string(), task, optimizer, format, output }
    }

    pub fn to_compact_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }

    /// Accepts a bare manifest, a JSON result document, or a CSV result whose
    /// first line carries the manifest.
    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        if let Some(rest) = text.strip_prefix(CSV_MANIFEST_PREFIX) {
            let line = rest.lines().next().unwrap_or_default();
            return Ok(serde_json::from_str(line)?);
        }
        let value: serde_json::Value = serde_json::from_str(&text)?;
        match value.get("manifest") {
            Some(inner) => Ok(serde_json::from_value(inner.clone())?),
            None => Ok(serde_json::from_value(value)?),
        }
    }
}

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}
