//! Evaluates a measure selection on one state.

use dissension_core::optim::MAX_GRID_DIM;
use dissension_core::{
    average_dissension, binding_information, discord_vector, dissension_vector, grid_oracle, interaction_information,
    par, total_correlation, DensityOperator, DissensionResult, DissensionSpec, Objective, OptimizerConfig, Partition,
    Track,
};

use crate::error::{CliError, Result};
use crate::manifest::{Measure, Selection};
use crate::output::Record;

fn scalar(state: &str, measure: &str, value: f64) -> Record {
    Record { state: state.into(), param: None, measure: measure.into(), anchor: None, value, converged: true, argmin: vec![] }
}

fn from_result(state: &str, measure: &str, r: DissensionResult) -> Record {
    Record {
        state: state.into(),
        param: None,
        measure: measure.into(),
        anchor: r.anchor,
        value: r.value,
        converged: r.converged,
        argmin: r.argmin,
    }
}

/// Grid-oracle minimum for each spec whose objective is small enough.
fn grid_records(r: &DensityOperator, state: &str, m: usize, t: Track, sel: &Selection, cfg: &OptimizerConfig) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for spec in DissensionSpec::vector(r.register(), m, t)? {
        let spec = spec.with_family(sel.family);
        let obj = Objective::new(r, &spec)?;
        if obj.dim() == 0 || obj.dim() > MAX_GRID_DIM {
            continue;
        }
        let (value, _) = grid_oracle(|x: &[f64]| obj.value(x), &obj.bounds(), cfg)?;
        let mut rec = scalar(state, &format!("grid_oracle.m{m}.t{t}"), value);
        rec.anchor = spec.anchor().map(|a| a.to_string());
        out.push(rec);
    }
    Ok(out)
}

/// Records in a fixed order: scalar measures, discords, then per-order
/// dissension entries and averages.
pub fn evaluate(r: &DensityOperator, state: &str, sel: &Selection, cfg: &OptimizerConfig) -> Result<Vec<Record>> {
    let measures = Measure::expand(&sel.measures);
    let explicit = !sel.measures.is_empty() && !sel.measures.contains(&Measure::All);
    let parts = Partition::singletons(r.register());
    let mut out = Vec::new();
    for m in &measures {
        match m {
            Measure::InteractionInfo => out.push(scalar(state, "interaction_information", interaction_information(r, &parts))),
            Measure::TotalCorrelation => out.push(scalar(state, "total_correlation", total_correlation(r, &parts))),
            Measure::BindingInfo => out.push(scalar(state, "binding_information", binding_information(r, &parts))),
            Measure::DiscordVector if r.n_qubits() == 2 => {
                let d = discord_vector(r, cfg)?;
                for e in [d.delta_x, d.delta_y, d.delta_a] {
                    out.push(from_result(state, "discord", e));
                }
            }
            Measure::DiscordVector if explicit => {
                return Err(CliError::Validation(format!(
                    "discord-vector needs a two-qubit state, `{state}` has {} qubits",
                    r.n_qubits()
                )));
            }
            _ => {}
        }
    }

    let wants_vectors = measures.contains(&Measure::Dissension) || measures.contains(&Measure::AverageDissension);
    if !wants_vectors {
        return Ok(out);
    }
    let orders = sel.orders(r.n_qubits());
    let vectors = par::map(&orders, |&(m, t)| dissension_vector(r, m, t, sel.family, cfg));
    for (&(m, t), v) in orders.iter().zip(vectors) {
        let v = v?;
        if measures.contains(&Measure::Dissension) {
            let name = format!("dissension.m{m}.t{t}");
            out.extend(v.entries.iter().cloned().map(|e| from_result(state, &name, e)));
            if sel.grid {
                out.extend(grid_records(r, state, m, t, sel, cfg)?);
            }
        }
        if measures.contains(&Measure::AverageDissension) {
            let mut rec = scalar(state, &format!("average_dissension.m{m}.t{t}"), average_dissension(&v));
            rec.converged = v.converged();
            out.push(rec);
        }
    }
    Ok(out)
}
