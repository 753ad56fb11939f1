//! Table reproduction against the checked-in reference values.

use std::collections::HashMap;
use std::sync::Mutex;

use dissension_core::states;
use dissension_core::{
    average_dissension, discord_vector, dissension_vector, par, BasisFamily, DissensionResult, DissensionVector, Error,
    OptimizerConfig, Track,
};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::output::{fmt_value, Table};

const FIXTURES: &str = include_str!("../fixtures/tables.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellMeasure {
    /// One value per anchor, or a single symmetric value.
    Vector,
    Average,
    /// Two-qubit `[delta_x, delta_y, delta_a]`.
    Discord,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Cell {
    pub measure: CellMeasure,
    pub m: usize,
    pub track: Track,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Row {
    pub label: String,
    pub state: String,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ReferenceTable {
    pub id: String,
    pub caption: String,
    pub tolerance: f64,
    pub integer_tolerance: f64,
    pub rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyKind {
    /// The computed minimum is lower and its argmin bases witness it.
    BelowReference,
    /// Reported but never scored.
    Excluded,
}

/// A reference entry known to disagree with the computed infimum.
#[derive(Clone, Debug, Deserialize)]
pub struct Discrepancy {
    pub table: String,
    pub state: String,
    pub measure: CellMeasure,
    pub m: usize,
    pub track: Track,
    /// Whole cell when absent.
    pub anchor: Option<String>,
    pub kind: DiscrepancyKind,
    pub reason: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Fixtures {
    pub tables: Vec<ReferenceTable>,
    pub discrepancies: Vec<Discrepancy>,
}

impl Fixtures {
    pub fn load() -> Self {
        serde_json::from_str(FIXTURES).expect("bundled fixtures parse")
    }

    pub fn table(&self, id: &str) -> Result<&ReferenceTable> {
        Ok(self.tables.iter().find(|t| t.id == id).ok_or_else(|| Error::UnknownTable(id.to_string()))?)
    }

    pub fn ids(&self) -> Vec<&str> {
        self.tables.iter().map(|t| t.id.as_str()).collect()
    }

    fn listed(&self, table: &str, state: &str, cell: &Cell, anchor: Option<&str>) -> Option<&Discrepancy> {
        self.discrepancies.iter().find(|d| {
            d.table == table
                && d.state == state
                && d.measure == cell.measure
                && d.m == cell.m
                && d.track == cell.track
                && (d.anchor.is_none() || d.anchor.as_deref() == anchor)
        })
    }

    /// The documented entry covering an outcome, if any.
    pub fn discrepancy(&self, c: &CellOutcome) -> Option<&Discrepancy> {
        let cell = Cell { measure: c.measure, m: c.m, track: c.track, values: vec![] };
        self.listed(&c.table, &c.state, &cell, c.anchor.as_deref())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Outside tolerance but on the documented list.
    Discrepancy,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Discrepancy => "discrepancy",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellOutcome {
    pub table: String,
    pub row: String,
    pub state: String,
    pub measure: CellMeasure,
    pub m: usize,
    pub track: Track,
    pub anchor: Option<String>,
    pub reference: f64,
    pub computed: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub converged: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Optimizer results behind the computed value, with their argmin bases.
    #[serde(skip)]
    pub witness: Vec<DissensionResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub id: String,
    pub caption: String,
    pub cells: Vec<CellOutcome>,
}

impl TableReport {
    pub fn count(&self, status: Status) -> usize {
        self.cells.iter().filter(|c| c.status == status).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "table {}: {} cells, {} pass, {} fail, {} documented discrepancies",
            self.id,
            self.cells.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Discrepancy)
        )
    }

    pub fn to_table(&self) -> Table {
        Table {
            header: vec![
                "table", "row", "state", "measure", "m", "track", "anchor", "reference", "computed", "abs_diff",
                "tolerance", "converged", "status",
            ],
            rows: self
                .cells
                .iter()
                .map(|c| {
                    vec![
                        c.table.clone(),
                        c.row.clone(),
                        c.state.clone(),
                        serde_json::to_value(c.measure).unwrap().as_str().unwrap().to_string(),
                        c.m.to_string(),
                        c.track.to_string(),
                        c.anchor.clone().unwrap_or_default(),
                        fmt_value(c.reference),
                        fmt_value(c.computed),
                        fmt_value(c.abs_diff),
                        fmt_value(c.tolerance),
                        c.converged.to_string(),
                        c.status.as_str().to_string(),
                    ]
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Job {
    Vector { state: String, m: usize, track: Track },
    Discord { state: String },
}

impl Job {
    fn of(state: &str, cell: &Cell) -> Job {
        match cell.measure {
            CellMeasure::Discord => Job::Discord { state: state.into() },
            _ => Job::Vector { state: state.into(), m: cell.m, track: cell.track },
        }
    }

    fn run(&self, cfg: &OptimizerConfig) -> Result<Vec<DissensionResult>> {
        Ok(match self {
            Job::Vector { state, m, track } => {
                dissension_vector(&states::named(state)?, *m, *track, BasisFamily::Joint, cfg)?.entries
            }
            Job::Discord { state } => {
                let d = discord_vector(&states::named(state)?, cfg)?;
                vec![d.delta_x, d.delta_y, d.delta_a]
            }
        })
    }
}

/// Computes tables, sharing vectors between tables that reuse a state.
pub struct Reproducer {
    fixtures: Fixtures,
    cfg: OptimizerConfig,
    cache: Mutex<HashMap<Job, Vec<DissensionResult>>>,
}

impl Reproducer {
    pub fn new(cfg: OptimizerConfig) -> Self {
        Reproducer { fixtures: Fixtures::load(), cfg, cache: Mutex::new(HashMap::new()) }
    }

    pub fn fixtures(&self) -> &Fixtures {
        &self.fixtures
    }

    /// Runs every uncached job of the table concurrently, then compares cells in fixture order.
    pub fn table(&self, id: &str) -> Result<TableReport> {
        let table = self.fixtures.table(id)?;
        let mut jobs: Vec<Job> = table.rows.iter().flat_map(|r| r.cells.iter().map(|c| Job::of(&r.state, c))).collect();
        jobs.sort();
        jobs.dedup();
        let pending: Vec<Job> = {
            let cache = self.cache.lock().expect("cache lock");
            jobs.into_iter().filter(|j| !cache.contains_key(j)).collect()
        };
        let results = par::map(&pending, |j| j.run(&self.cfg));
        {
            let mut cache = self.cache.lock().expect("cache lock");
            for (j, r) in pending.into_iter().zip(results) {
                cache.insert(j, r?);
            }
        }
        let cache = self.cache.lock().expect("cache lock");
        let mut cells = Vec::new();
        for row in &table.rows {
            for cell in &row.cells {
                let entries = &cache[&Job::of(&row.state, cell)];
                let computed: Vec<(Option<String>, f64, bool, Vec<DissensionResult>)> = match cell.measure {
                    CellMeasure::Average => {
                        let v = DissensionVector { m: cell.m, track: cell.track, entries: entries.clone() };
                        vec![(None, average_dissension(&v), v.converged(), v.entries)]
                    }
                    _ => entries.iter().map(|e| (e.anchor.clone(), e.value, e.converged, vec![e.clone()])).collect(),
                };
                if computed.len() != cell.values.len() {
                    return Err(Error::Unsupported(format!(
                        "table {id} row {} expects {} entries, computed {}",
                        row.label,
                        cell.values.len(),
                        computed.len()
                    ))
                    .into());
                }
                for (&reference, (anchor, value, converged, witness)) in cell.values.iter().zip(computed) {
                    let tolerance = if (reference - reference.round()).abs() < 1e-9 {
                        table.integer_tolerance
                    } else {
                        table.tolerance
                    };
                    let abs_diff = (value - reference).abs();
                    let listed = self.fixtures.listed(id, &row.state, cell, anchor.as_deref());
                    let status = match (abs_diff <= tolerance, listed) {
                        (true, _) => Status::Pass,
                        (false, Some(_)) => Status::Discrepancy,
                        (false, None) => Status::Fail,
                    };
                    cells.push(CellOutcome {
                        table: id.to_string(),
                        row: row.label.clone(),
                        state: row.state.clone(),
                        measure: cell.measure,
                        m: cell.m,
                        track: cell.track,
                        anchor,
                        reference,
                        computed: value,
                        abs_diff,
                        tolerance,
                        converged,
                        status,
                        note: listed.filter(|_| status == Status::Discrepancy).map(|d| d.reason.clone()),
                        witness,
                    });
                }
            }
        }
        Ok(TableReport { id: id.to_string(), caption: table.caption.clone(), cells })
    }
}
