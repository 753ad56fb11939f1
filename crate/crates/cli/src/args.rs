//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dissension_core::{BasisFamily, Track};

use crate::manifest::{Format, Measure};

#[derive(Debug, Parser)]
#[command(name = "dissension", version, about = "Measurement-based multipartite correlation vectors for qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Re-run a manifest, or a CSV/JSON result that embeds one.
    #[arg(long, global = true, value_name = "FILE")]
    pub replay: Option<PathBuf>,

    /// Output file; a `<FILE>.manifest.json` sidecar is written next to it.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for independent cells, points and restarts.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog states, or print one as a JSON matrix with --state.
    Catalog {
        #[arg(long)]
        state: Option<String>,
        #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
        params: Vec<(String, f64)>,
    },
    /// Evaluate measures on one state.
    Compute {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        measures: MeasureArgs,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Evaluate measures across a parameter range of a catalog family.
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        /// `KEY=START:STOP:COUNT` or `KEY=V1,V2,...`.
        #[arg(long, value_name = "KEY=RANGE")]
        sweep: String,
        #[command(flatten)]
        measures: MeasureArgs,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Recompute a reference table and compare cell by cell.
    Reproduce {
        /// Table id (E, I to VIII).
        table: String,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Check a state against the density-operator invariants.
    Validate {
        #[command(flatten)]
        state: StateArgs,
    },
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Catalog state name.
    #[arg(long, conflicts_with = "state_file", required_unless_present = "state_file")]
    pub state: Option<String>,

    /// JSON matrix file with `register`, `matrix_re`, `matrix_im`.
    #[arg(long, value_name = "FILE")]
    pub state_file: Option<PathBuf>,

    /// Catalog parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Measures to evaluate, repeatable or comma separated; all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub measure: Vec<Measure>,

    /// Measured-party count for dissension measures.
    #[arg(long)]
    pub m: Option<usize>,

    /// Conditioning track, 1 or 2; both when omitted.
    #[arg(long, value_parser = parse_track)]
    pub track: Option<Track>,

    /// Basis class searched on each conditioning subset.
    #[arg(long, value_parser = parse_family, default_value = "joint")]
    pub family: BasisFamily,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    /// JSON file with any of `restarts`, `max_iterations`, `simplex_tolerance`, `seed`, `grid_density`.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Random restarts per conditioning subset.
    #[arg(long)]
    pub restarts: Option<usize>,

    /// Simplex iterations per restart.
    #[arg(long)]
    pub iterations: Option<usize>,

    #[arg(long, env = "DISSENSION_SEED")]
    pub seed: Option<u64>,

    /// Also minimize small objectives on an N-point-per-axis grid.
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,

    /// Half the restarts.
    #[arg(long, conflicts_with = "thorough")]
    pub fast: bool,

    /// Twice the restarts.
    #[arg(long)]
    pub thorough: bool,
}

pub fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("`{s}` is not KEY=VALUE"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

pub fn parse_track(s: &str) -> Result<Track, String> {
    let v: u8 = s.parse().map_err(|_| format!("`{s}` is not 1 or 2"))?;
    Track::try_from(v).map_err(|e| e.to_string())
}

pub fn parse_family(s: &str) -> Result<BasisFamily, String> {
    match s {
        "joint" => Ok(BasisFamily::Joint),
        "product" => Ok(BasisFamily::Product),
        _ => Err(format!("`{s}` is not joint or product")),
    }
}
