//! Parameter sweeps over a catalog family.

use dissension_core::states::{self, StateRecipe};
use dissension_core::{par, OptimizerConfig};

use crate::compute::evaluate;
use crate::error::{CliError, Result};
use crate::manifest::Selection;
use crate::output::Record;

/// Parses `start:stop:count` (inclusive, evenly spaced) or a comma list.
pub fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| CliError::Parse(format!("`{s}` is not a number in sweep range `{spec}`")))
    };
    let pieces: Vec<&str> = spec.split(':').collect();
    match pieces.as_slice() {
        [start, stop, count] => {
            let (a, b) = (num(start)?, num(stop)?);
            let n: usize = count
                .trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("sweep point count `{count}` is not a positive integer")))?;
            match n {
                0 => Err(CliError::Parse("sweep needs at least one point".into())),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(CliError::Parse(format!("sweep range `{spec}` must be start:stop:count or a comma list"))),
    }
}

/// Evaluates `sel` at each value of `parameter`, one job per point.
pub fn sweep(
    base: &StateRecipe,
    parameter: &str,
    values: &[f64],
    sel: &Selection,
    cfg: &OptimizerConfig,
) -> Result<Vec<Record>> {
    let entry = states::lookup(&base.name).ok_or_else(|| dissension_core::Error::UnknownState(base.name.clone()))?;
    if !entry.params.iter().any(|p| p.name == parameter) {
        return Err(CliError::Validation(format!("`{}` has no parameter `{parameter}`", base.name)));
    }
    let points = par::map(values, |&v| -> Result<Vec<Record>> {
        let r = states::build(&base.clone().with(parameter, v))?;
        let mut recs = evaluate(&r, &base.name, sel, cfg)?;
        for rec in &mut recs {
            rec.param = Some(v);
        }
        Ok(recs)
    });
    let mut out = Vec::new();
    for p in points {
        out.extend(p?);
    }
    Ok(out)
}
