//! Multi-restart Nelder–Mead minimization and an exhaustive grid oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Largest dimension the grid oracle accepts.
pub const MAX_GRID_DIM: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Simplex iterations allowed per restart.
    pub max_iterations: usize,
    pub simplex_tolerance: f64,
    pub seed: u64,
    pub grid_density: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { restarts: 20, max_iterations: 2000, simplex_tolerance: 1e-8, seed: 0, grid_density: 60 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str, reason: &str| {
            Err(Error::ParamOutOfRange { name: name.into(), reason: reason.into() })
        };
        if self.restarts == 0 {
            return bad("restarts", "must be at least 1");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations", "must be at least 1");
        }
        if !(self.simplex_tolerance > 0.0) {
            return bad("simplex_tolerance", "must be positive");
        }
        if self.grid_density < 2 {
            return bad("grid_density", "must be at least 2");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// True when the winning restart met the simplex tolerance within budget.
    pub converged: bool,
    pub restarts_used: usize,
    /// Restarts abandoned after a non-finite objective value.
    pub restarts_failed: usize,
    pub evaluations: usize,
    /// Best value seen after each restart, in restart order.
    pub history: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub diagnostics: Diagnostics,
}

struct RestartOutcome {
    value: f64,
    point: Vec<f64>,
    converged: bool,
    evaluations: usize,
}

/// Minimizes `f` over a box from `cfg.restarts` starting points.
///
/// The first starts are `fixed_starts` in order (the zero vector when that is
/// empty); the remaining ones are uniform in `bounds`, restart `k` drawing from
/// a generator seeded with `cfg.seed + k`.
pub fn minimize<F>(f: F, bounds: &[(f64, f64)], fixed_starts: &[Vec<f64>], cfg: &OptimizerConfig) -> Result<Minimum>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    cfg.validate()?;
    let dim = bounds.len();
    if dim == 0 {
        return Err(Error::ParamOutOfRange { name: "dim".into(), reason: "must be at least 1".into() });
    }
    let zero = [vec![0.0; dim]];
    let fixed = if fixed_starts.is_empty() { &zero[..] } else { fixed_starts };
    if let Some(bad) = fixed.iter().find(|s| s.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
    }
    let starts: Vec<Vec<f64>> = (0..cfg.restarts)
        .map(|k| match fixed.get(k) {
            Some(s) => s.clone(),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
                bounds.iter().map(|(lo, hi)| rng.random_range(*lo..=*hi)).collect()
            }
        })
        .collect();

    let outcomes = par::map(&starts, |x0| run_restart(&f, x0, bounds, cfg));

    let mut best: Option<RestartOutcome> = None;
    let mut history = Vec::with_capacity(outcomes.len());
    let mut failed = 0;
    let mut evaluations = 0;
    for outcome in outcomes {
        match outcome {
            Some(o) => {
                evaluations += o.evaluations;
                if best.as_ref().is_none_or(|b| o.value < b.value) {
                    best = Some(o);
                }
            }
            None => failed += 1,
        }
        history.push(best.as_ref().map_or(f64::INFINITY, |b| b.value));
    }
    let best = best.ok_or_else(|| Error::Unsupported("objective was non-finite at every start".into()))?;
    Ok(Minimum {
        value: best.value,
        argmin: best.point,
        diagnostics: Diagnostics {
            converged: best.converged,
            restarts_used: cfg.restarts,
            restarts_failed: failed,
            evaluations,
            history,
        },
    })
}

/// Nelder–Mead from `x0`, restarted from its own optimum while that keeps
/// improving and budget remains. `None` if a non-finite value shows up.
fn run_restart<F>(f: &F, x0: &[f64], bounds: &[(f64, f64)], cfg: &OptimizerConfig) -> Option<RestartOutcome>
where
    F: Fn(&[f64]) -> f64,
{
    let mut budget = cfg.max_iterations;
    let mut point = x0.to_vec();
    let mut value = f64::INFINITY;
    let mut converged = false;
    let mut evaluations = 0;
    while budget > 0 {
        let run = nelder_mead(f, &point, bounds, cfg.simplex_tolerance, budget)?;
        evaluations += run.evaluations;
        budget = budget.saturating_sub(run.iterations);
        let improved = value - run.value > cfg.simplex_tolerance;
        if run.value <= value {
            value = run.value;
            point = run.point;
        }
        converged = run.converged;
        if !run.converged || !improved {
            break;
        }
    }
    Some(RestartOutcome { value, point, converged, evaluations })
}

struct SimplexRun {
    value: f64,
    point: Vec<f64>,
    converged: bool,
    evaluations: usize,
    iterations: usize,
}

/// Adaptive-coefficient Nelder–Mead; the initial simplex steps a tenth of
/// each coordinate's range. Converged once the vertex values agree to `tol`;
/// the simplex diameter is not checked because basis parameterizations carry
/// flat directions (phases) along which it need not shrink.
fn nelder_mead<F>(f: &F, x0: &[f64], bounds: &[(f64, f64)], tol: f64, budget: usize) -> Option<SimplexRun>
where
    F: Fn(&[f64]) -> f64,
{
    let d = x0.len();
    let df = d as f64;
    let (alpha, gamma) = (1.0, 1.0 + 2.0 / df);
    let (rho, sigma) = (0.75 - 1.0 / (2.0 * df), 1.0 - 1.0 / df.max(2.0));
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| -> Option<f64> {
        evals.set(evals.get() + 1);
        let v = f(x);
        v.is_finite().then_some(v)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), eval(x0)?));
    for i in 0..d {
        let mut x = x0.to_vec();
        let span = bounds[i].1 - bounds[i].0;
        let step = if span > 0.0 { 0.1 * span } else { 0.1 };
        x[i] += step;
        let v = eval(&x)?;
        simplex.push((x, v));
    }

    let mut converged = false;
    let mut iterations = 0;
    while iterations < budget {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[d].1);
        if worst - best <= tol * (1.0 + best.abs()) {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / df;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[d].0).map(|(c, w)| c + t * (c - w)).collect()
        };
        let xr = along(alpha);
        let fr = eval(&xr)?;
        if fr < best {
            let xe = along(alpha * gamma);
            let fe = eval(&xe)?;
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let xc = along(alpha * rho);
            let fc = eval(&xc)?;
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = eval(&xc)?;
            (xc, fc)
        };
        if fc < fr.min(worst) {
            simplex[d] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = x_best.iter().zip(&vertex.0).map(|(b, v)| b + sigma * (v - b)).collect();
            let v = eval(&x)?;
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (point, value) = simplex.swap_remove(0);
    Some(SimplexRun { value, point, converged, evaluations: evals.get(), iterations })
}


/// Exhaustive minimum over the regular grid with `cfg.grid_density` points per
/// coordinate, endpoints included. Ties keep the first point in row-major order.
pub fn grid_oracle<F>(f: F, bounds: &[(f64, f64)], cfg: &OptimizerConfig) -> Result<(f64, Vec<f64>)>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let dim = bounds.len();
    if dim > MAX_GRID_DIM {
        return Err(Error::GridTooLarge(dim));
    }
    if dim == 0 {
        return Err(Error::ParamOutOfRange { name: "dim".into(), reason: "must be at least 1".into() });
    }
    let g = cfg.grid_density;
    if g < 2 {
        return Err(Error::ParamOutOfRange { name: "grid_density".into(), reason: "must be at least 2".into() });
    }
    let coord = |axis: usize, i: usize| {
        let (lo, hi) = bounds[axis];
        lo + (hi - lo) * i as f64 / (g - 1) as f64
    };
    let inner = g.pow(dim as u32 - 1);
    let first: Vec<usize> = (0..g).collect();
    let slabs = par::map(&first, |&i0| {
        let mut x = vec![0.0; dim];
        x[0] = coord(0, i0);
        let mut best = (f64::INFINITY, Vec::new());
        for flat in 0..inner {
            let mut rest = flat;
            for axis in (1..dim).rev() {
                x[axis] = coord(axis, rest % g);
                rest /= g;
            }
            let v = f(&x);
            if v < best.0 {
                best = (v, x.clone());
            }
        }
        best
    });
    let mut best = (f64::INFINITY, Vec::new());
    for slab in slabs {
        if slab.0 < best.0 {
            best = slab;
        }
    }
    if best.1.is_empty() {
        return Err(Error::Unsupported("objective was non-finite on the whole grid".into()));
    }
    Ok(best)
}
