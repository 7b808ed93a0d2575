use serde::{Deserialize, Serialize};

use super::{integrate, StepControl, Trajectory};
use crate::error::{Error, Result};
use crate::model::{HistorySpec, ModelSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceOptions {
    /// Fixed step sizes, coarsest first; at least four.
    pub steps: Vec<f64>,
    pub honor_breakpoints: bool,
}

impl ConvergenceOptions {
    pub fn halving(base: f64, levels: usize, honor_breakpoints: bool) -> Self {
        let steps = (0..levels).map(|i| base / 2f64.powi(i as i32)).collect();
        ConvergenceOptions { steps, honor_breakpoints }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    /// Least-squares slope of `log(error)` against `log(step)`.
    pub order: f64,
    pub steps: Vec<f64>,
    /// Maximum mesh error per step size.
    pub errors: Vec<f64>,
    /// Set when the errors do not decrease strictly.
    pub inconclusive: bool,
}

/// Observed convergence order of fixed-step runs against an exact solution.
pub fn convergence_order(
    model: &ModelSpec,
    history: &HistorySpec,
    horizon: f64,
    exact: &dyn Fn(f64) -> f64,
    options: &ConvergenceOptions,
) -> Result<OrderEstimate> {
    if options.steps.len() < 4 {
        return Err(Error::Precondition("need at least four step sizes".into()));
    }
    let mut errors = Vec::with_capacity(options.steps.len());
    for &h in &options.steps {
        let tr = integrate(model, history, horizon, &StepControl::fixed(h, options.honor_breakpoints))?;
        if tr.blow_up() {
            return Err(Error::Precondition(format!("run with step {h} blew up")));
        }
        let e = tr.mesh().iter().map(|&(t, x)| (x - exact(t)).abs()).fold(0.0, f64::max);
        errors.push(e);
    }
    let inconclusive = errors.windows(2).any(|w| !(w[1] < w[0])) || errors.iter().any(|&e| e <= 0.0);
    let xs: Vec<f64> = options.steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(OrderEstimate { order: sxy / sxx, steps: options.steps.clone(), errors, inconclusive })
}

/// Tight-tolerance run for use as a reference solution.
pub fn reference_solution(model: &ModelSpec, history: &HistorySpec, horizon: f64) -> Result<Trajectory> {
    integrate(model, history, horizon, &StepControl::with_tolerances(1e-12, 1e-14))
}
