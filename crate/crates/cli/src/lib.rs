//! Library side of the `dissension` binary.

pub mod args;
pub mod compute;
pub mod error;
pub mod manifest;
pub mod output;
pub mod reproduce;
pub mod sweep;

use std::path::Path;

use dissension_core::qformalism::StateJson;
use dissension_core::states::{self, StateRecipe};
use dissension_core::OptimizerConfig;
use serde::Deserialize;

use crate::args::{Cli, Command, MeasureArgs, OptimizerArgs, StateArgs};
use crate::error::{CliError, Result, EXIT_NOT_CONVERGED, EXIT_VALIDATION};
use crate::manifest::{read, Format, RunManifest, Selection, StateSource, Task};
use crate::output::{compute_table, emit, render, sweep_table, Record, Table};
use crate::reproduce::{Reproducer, Status};

/// What a successful run found.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    /// Table cells outside tolerance, or states failing validation.
    pub failures: usize,
    pub unconverged: usize,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.failures > 0 {
            EXIT_VALIDATION
        } else if self.unconverged > 0 {
            EXIT_NOT_CONVERGED
        } else {
            0
        }
    }
}

/// Optional optimizer settings read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    restarts: Option<usize>,
    max_iterations: Option<usize>,
    simplex_tolerance: Option<f64>,
    seed: Option<u64>,
    grid_density: Option<usize>,
}

/// Defaults, then the config file, then flags (the seed flag also reads
/// `DISSENSION_SEED`), then `--fast`/`--thorough` scaling.
pub fn optimizer_config(a: &OptimizerArgs) -> Result<OptimizerConfig> {
    let file: ConfigFile = match &a.config {
        Some(path) => serde_json::from_str(&read(path)?)?,
        None => ConfigFile::default(),
    };
    let d = OptimizerConfig::default();
    let mut cfg = OptimizerConfig {
        restarts: a.restarts.or(file.restarts).unwrap_or(d.restarts),
        max_iterations: a.iterations.or(file.max_iterations).unwrap_or(d.max_iterations),
        simplex_tolerance: file.simplex_tolerance.unwrap_or(d.simplex_tolerance),
        seed: a.seed.or(file.seed).unwrap_or(d.seed),
        grid_density: a.grid.or(file.grid_density).unwrap_or(d.grid_density),
    };
    if a.fast {
        cfg.restarts = (cfg.restarts / 2).max(1);
    }
    if a.thorough {
        cfg.restarts *= 2;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn recipe(name: &str, params: &[(String, f64)]) -> StateRecipe {
    params.iter().fold(StateRecipe::new(name), |r, (k, v)| r.with(k, *v))
}

fn state_source(a: &StateArgs) -> Result<StateSource> {
    match (&a.state, &a.state_file) {
        (Some(name), None) => Ok(StateSource::Catalog(recipe(name, &a.params))),
        (None, Some(path)) if a.params.is_empty() => StateSource::from_file(path),
        (None, Some(_)) => Err(CliError::Parse("--param applies to catalog states only".into())),
        _ => Err(CliError::Parse("give exactly one of --state or --state-file".into())),
    }
}

fn selection(a: &MeasureArgs, grid: bool) -> Selection {
    Selection { measures: a.measure.clone(), m: a.m, track: a.track, family: a.family, grid }
}

/// Builds the manifest for a result-producing command, or `None` for the others.
fn manifest_for(cli: &Cli, command: &Command) -> Result<Option<RunManifest>> {
    let format = cli.format.unwrap_or_default();
    let task_and_cfg = match command {
        Command::Compute { state, measures, optimizer } => {
            let task = Task::Compute { state: state_source(state)?, selection: selection(measures, optimizer.grid.is_some()) };
            (task, optimizer_config(optimizer)?)
        }
        Command::Sweep { state, sweep, measures, optimizer } => {
            let (parameter, range) = sweep
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("--sweep `{sweep}` is not KEY=RANGE")))?;
            let task = Task::Sweep {
                state: state_source(state)?,
                parameter: parameter.trim().to_string(),
                values: sweep::parse_values(range)?,
                selection: selection(measures, optimizer.grid.is_some()),
            };
            (task, optimizer_config(optimizer)?)
        }
        Command::Reproduce { table, optimizer } => (Task::Reproduce { table: table.clone() }, optimizer_config(optimizer)?),
        Command::Catalog { .. } | Command::Validate { .. } => return Ok(None),
    };
    let (task, cfg) = task_and_cfg;
    Ok(Some(RunManifest::new(task, cfg, format, cli.out.clone())))
}

fn unconverged(records: &[Record]) -> usize {
    records.iter().filter(|r| !r.converged).count()
}

/// Executes a manifest and renders its document.
pub fn execute(manifest: &RunManifest) -> Result<(String, Outcome)> {
    let cfg = &manifest.optimizer;
    cfg.validate()?;
    match &manifest.task {
        Task::Compute { state, selection } => {
            let r = state.build()?;
            let records = compute::evaluate(&r, &state.label(), selection, cfg)?;
            let doc = render(manifest, &compute_table(&records), "records", &records)?;
            Ok((doc, Outcome { failures: 0, unconverged: unconverged(&records) }))
        }
        Task::Sweep { state, parameter, values, selection } => {
            let StateSource::Catalog(base) = state else {
                return Err(CliError::Validation("sweeps need a catalog state".into()));
            };
            let records = sweep::sweep(base, parameter, values, selection, cfg)?;
            let doc = render(manifest, &sweep_table(&records), "records", &records)?;
            Ok((doc, Outcome { failures: 0, unconverged: unconverged(&records) }))
        }
        Task::Reproduce { table } => {
            let report = Reproducer::new(cfg.clone()).table(table)?;
            eprintln!("{}", report.summary());
            let doc = render(manifest, &report.to_table(), "table", &report)?;
            Ok((doc, Outcome { failures: report.count(Status::Fail), unconverged: 0 }))
        }
    }
}

fn catalog(cli: &Cli, state: &Option<String>, params: &[(String, f64)]) -> Result<Outcome> {
    let format = cli.format.unwrap_or_default();
    let doc = match state {
        Some(name) => serde_json::to_string_pretty(&states::build(&recipe(name, params))?.to_json())? + "\n",
        None if format == Format::Json => serde_json::to_string_pretty(&states::catalog())? + "\n",
        None => {
            let rows = states::catalog()
                .into_iter()
                .map(|e| {
                    let ps: Vec<String> =
                        e.params.iter().map(|p| format!("{}={} in [{}, {}]", p.name, p.default, p.min, p.max)).collect();
                    vec![e.name, e.qubits.to_string(), ps.join("; "), e.description]
                })
                .collect();
            csv_only(&Table { header: vec!["name", "qubits", "params", "description"], rows })?
        }
    };
    write_plain(&doc, cli.out.as_deref())?;
    Ok(Outcome::default())
}

fn csv_only(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}

fn write_plain(doc: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, doc)?,
        None => print!("{doc}"),
    }
    Ok(())
}

fn validate(cli: &Cli, a: &StateArgs) -> Result<Outcome> {
    let report = match state_source(a)? {
        StateSource::Catalog(r) => states::build(&r)?.validate(),
        StateSource::File { state, .. } => StateJson::validate(&state)?,
    };
    let doc = match cli.format.unwrap_or_default() {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => format!("{report}\n"),
    };
    write_plain(&doc, cli.out.as_deref())?;
    Ok(Outcome { failures: usize::from(!report.passed), unconverged: 0 })
}

#[cfg(feature = "parallel")]
fn configure_threads(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::Parse("--jobs must be at least 1".into()));
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(jobs: Option<usize>) -> Result<()> {
    if jobs.is_some_and(|n| n > 1) {
        eprintln!("warning: built without the `parallel` feature, --jobs ignored");
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    configure_threads(cli.jobs)?;
    let manifest = match (&cli.replay, &cli.command) {
        (Some(_), Some(_)) => return Err(CliError::Parse("--replay takes no subcommand".into())),
        (None, None) => return Err(CliError::Parse("a subcommand or --replay is required".into())),
        (Some(path), None) => {
            if cli.format.is_some() {
                return Err(CliError::Parse("--replay keeps the recorded format".into()));
            }
            RunManifest::load(path)?
        }
        (None, Some(Command::Catalog { state, params })) => return catalog(cli, state, params),
        (None, Some(Command::Validate { state })) => return validate(cli, state),
        (None, Some(command)) => manifest_for(cli, command)?.expect("result-producing command"),
    };
    let (doc, outcome) = execute(&manifest)?;
    emit(&doc, &manifest, cli.out.as_deref())?;
    if outcome.unconverged > 0 {
        eprintln!("warning: {} entries did not meet the simplex tolerance", outcome.unconverged);
    }
    Ok(outcome)
}
