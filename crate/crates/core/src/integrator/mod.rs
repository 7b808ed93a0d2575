//! Method-of-steps solver with adaptive Dormand-Prince steps and dense output.

mod convergence;
mod dopri;
mod export;

pub use convergence::{convergence_order, reference_solution, ConvergenceOptions, OrderEstimate};
pub use dopri::Segment;
pub use export::{write_trajectory_csv, Manifest};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{HistorySpec, ModelSpec, TimePoint};
use dopri::{A, C, E};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Defaults to `min(tau / 4, 0.1)` over the bounded positive lags.
    pub max_step: Option<f64>,
    pub min_step: f64,
    pub initial_step: Option<f64>,
    pub overflow_guard: f64,
    /// Extra mandatory mesh points.
    pub breakpoint_times: Vec<f64>,
    /// Disables error control and uses this step everywhere.
    pub fixed_step: Option<f64>,
    pub honor_breakpoints: bool,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: None,
            min_step: 1e-12,
            initial_step: None,
            overflow_guard: 1e300,
            breakpoint_times: Vec::new(),
            fixed_step: None,
            honor_breakpoints: true,
        }
    }
}

impl StepControl {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        StepControl { rel_tol, abs_tol, ..Default::default() }
    }

    pub fn fixed(step: f64, honor_breakpoints: bool) -> Self {
        StepControl { fixed_step: Some(step), honor_breakpoints, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Precondition(format!("step control: {what}")));
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.overflow_guard > 0.0) || !(self.min_step > 0.0) {
            return bad("guards must be positive");
        }
        if matches!(self.fixed_step, Some(h) if !(h > 0.0)) || matches!(self.max_step, Some(h) if !(h > 0.0)) {
            return bad("steps must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub corrections: usize,
    pub rhs_evals: usize,
}

/// Solution on `[0, t_final]` together with its history.
#[derive(Debug, Clone)]
pub struct Trajectory {
    label: String,
    history: HistorySpec,
    segments: Vec<Segment>,
    horizon: f64,
    blow_up: bool,
    positivity_floor: f64,
    negativity_violations: usize,
    breakpoints: Vec<f64>,
    stats: StepStats,
    control: StepControl,
}

fn lookup(segments: &[Segment], s: f64) -> f64 {
    let i = segments.partition_point(|g| g.t1 < s).min(segments.len() - 1);
    segments[i].eval(s)
}

impl Trajectory {
    /// Dense value at `s`, from the history for `s <= 0`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        let upper = self.t_final();
        let lower = self.history.support_depth().map_or(f64::NEG_INFINITY, |d| -d);
        if s.is_nan() || s > upper || s < lower {
            return Err(Error::OutOfRange { time: s, lower, upper });
        }
        Ok(self.value(s))
    }

    pub(crate) fn value(&self, s: f64) -> f64 {
        if s <= 0.0 || self.segments.is_empty() {
            self.history.eval(s.min(0.0))
        } else {
            lookup(&self.segments, s)
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn history(&self) -> &HistorySpec {
        &self.history
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn t_final(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.t1)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn final_value(&self) -> f64 {
        self.value(self.t_final())
    }

    pub fn blow_up(&self) -> bool {
        self.blow_up
    }

    pub fn positivity_floor(&self) -> f64 {
        self.positivity_floor
    }

    pub fn negativity_violations(&self) -> usize {
        self.negativity_violations
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    pub fn control(&self) -> &StepControl {
        &self.control
    }

    /// Mesh nodes `(t, x)` including `t = 0`.
    pub fn mesh(&self) -> Vec<(f64, f64)> {
        let mut out = vec![(0.0, self.history.eval(0.0))];
        out.extend(self.segments.iter().map(|s| (s.t1, s.end_value())));
        out
    }

    /// `n + 1` equally spaced samples on `[lo, hi]`.
    pub fn sample(&self, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|i| {
                let t = if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 };
                (t, self.value(t))
            })
            .collect()
    }
}

/// Mandatory mesh points in `(0, horizon]`: declared jumps of delays and
/// coefficients plus the origin propagated through constant lags up to order 3.
pub fn propagate_breakpoints(model: &ModelSpec, horizon: f64) -> Vec<f64> {
    let mut pts = model.coefficient_jumps(0.0, horizon);
    for d in model.delays() {
        pts.extend(d.breakpoints_in(0.0, horizon));
    }
    let mut lags: Vec<f64> = model.delays().iter().filter_map(|d| d.constant_lag()).filter(|&t| t > 0.0).collect();
    lags.sort_by(f64::total_cmp);
    lags.dedup();
    let mut level = vec![0.0];
    for _ in 0..3 {
        let next: Vec<f64> = level.iter().flat_map(|&s| lags.iter().map(move |&l| s + l)).collect();
        pts.extend(next.iter().copied().filter(|&t| t <= horizon));
        level = next;
    }
    clean_points(pts, horizon)
}

fn clean_points(mut pts: Vec<f64>, horizon: f64) -> Vec<f64> {
    let tol = |t: f64| 1e-12 * t.abs().max(1.0);
    pts.retain(|&t| t > tol(0.0) && t <= horizon + tol(horizon));
    pts.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for t in pts {
        match out.last() {
            Some(&last) if t - last <= tol(t) => {}
            _ => out.push(t),
        }
    }
    out
}

fn default_max_step(model: &ModelSpec) -> f64 {
    model.delays().iter().filter_map(|d| d.bound()).filter(|&tau| tau > 0.0).map(|tau| tau / 4.0).fold(0.1, f64::min)
}

#[derive(Clone, Copy)]
enum Guess {
    Extrapolate(Option<Segment>, f64),
    Poly(Segment),
}

impl Guess {
    fn eval(&self, s: f64) -> f64 {
        match self {
            Guess::Extrapolate(Some(seg), _) => seg.eval(s),
            Guess::Extrapolate(None, y0) => *y0,
            Guess::Poly(seg) => seg.eval(s),
        }
    }
}

struct Attempt {
    k: [f64; 7],
    y1: f64,
    err: f64,
    used_guess: bool,
}

struct Solver<'a> {
    model: &'a ModelSpec,
    history: &'a HistorySpec,
    segments: Vec<Segment>,
    args: Vec<f64>,
    stats: StepStats,
}

impl Solver<'_> {
    fn past(&self, s: f64) -> f64 {
        if s <= 0.0 || self.segments.is_empty() {
            self.history.eval(s.min(0.0))
        } else {
            lookup(&self.segments, s)
        }
    }

    fn rhs(&mut self, s: f64, anchor: f64, y: f64, t0: f64, guess: &Guess) -> Result<(f64, bool)> {
        let at = TimePoint::in_step(s, anchor);
        let eps = 1e-12 * t0.abs().max(1.0);
        let mut used = false;
        for j in 0..self.model.arity() {
            let d = &self.model.delays()[j];
            let v = if d.is_current() {
                y
            } else {
                let hs = d.eval(at);
                if hs <= t0 + eps {
                    self.past(hs)
                } else {
                    used = true;
                    guess.eval(hs)
                }
            };
            self.args[j] = v.max(0.0);
        }
        self.stats.rhs_evals += 1;
        let d = self.model.rhs(at, &self.args, y.max(0.0));
        if d.is_nan() && y.is_finite() && self.args.iter().all(|a| a.is_finite()) {
            return Err(Error::IntegrationFault {
                time: t0,
                detail: format!("right-hand side is NaN at t = {s}, x = {y}, args = {:?}", self.args),
            });
        }
        Ok((d, used))
    }

    fn attempt(&mut self, t0: f64, y0: f64, t1: f64, guess: Guess) -> Result<Attempt> {
        let h = t1 - t0;
        let anchor = t0 + 0.5 * h;
        let mut k = [0.0; 7];
        let mut used_guess = false;
        for i in 0..7 {
            let y = y0 + h * (0..i).map(|j| A[i][j] * k[j]).sum::<f64>();
            let s = if i >= 5 { t1 } else { t0 + C[i] * h };
            let (d, used) = self.rhs(s, anchor, y, t0, &guess)?;
            k[i] = d;
            used_guess |= used;
        }
        let y1 = y0 + h * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
        let err = (h * E.iter().zip(&k).map(|(e, ki)| e * ki).sum::<f64>()).abs();
        Ok(Attempt { k, y1, err, used_guess })
    }
}

/// Solves the initial value problem on `[0, horizon]`.
///
/// Integration stops early, with `blow_up` set, once the solution exceeds
/// `overflow_guard` or the error-controlled step falls below `min_step`.
pub fn integrate(model: &ModelSpec, history: &HistorySpec, horizon: f64, control: &StepControl) -> Result<Trajectory> {
    control.validate()?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Precondition(format!("horizon must be positive and finite, got {horizon}")));
    }
    let y0 = history.eval(0.0);
    if !(y0 > 0.0) {
        return Err(Error::Precondition(format!("history must satisfy phi(0) > 0, got {y0}")));
    }
    let breakpoints = if control.honor_breakpoints {
        let mut pts = propagate_breakpoints(model, horizon);
        pts.extend(control.breakpoint_times.iter().copied());
        clean_points(pts, horizon)
    } else {
        Vec::new()
    };
    let max_step = control.max_step.unwrap_or_else(|| default_max_step(model));
    let fixed = control.fixed_step.is_some();

    let mut solver =
        Solver { model, history, segments: Vec::new(), args: vec![0.0; model.arity()], stats: StepStats::default() };
    let mut traj = Trajectory {
        label: model.label().to_string(),
        history: history.clone(),
        segments: Vec::new(),
        horizon,
        blow_up: false,
        positivity_floor: y0,
        negativity_violations: 0,
        breakpoints: breakpoints.clone(),
        stats: StepStats::default(),
        control: control.clone(),
    };

    let mut t = 0.0;
    let mut y = y0;
    let mut h = control.fixed_step.or(control.initial_step).unwrap_or(max_step.min(1e-3 * horizon).max(1e-6));
    let mut next_bp = 0;
    while t < horizon {
        while next_bp < breakpoints.len() && breakpoints[next_bp] <= t * (1.0 + 1e-15) {
            next_bp += 1;
        }
        let target = breakpoints.get(next_bp).copied().unwrap_or(horizon).min(horizon);
        let gap = target - t;
        let step = if fixed { h } else { h.min(max_step) };
        let stretch = if fixed { 1.0 - 1e-9 } else { 0.99 };
        let (t1, hits) = if step >= gap * stretch { (target, true) } else { (t + step, false) };
        let dt = t1 - t;

        let guess = Guess::Extrapolate(solver.segments.last().copied(), y);
        let mut att = solver.attempt(t, y, t1, guess)?;
        if att.used_guess {
            let poly = Segment::from_stages(t, t1, y, att.y1, &att.k);
            let corrected = solver.attempt(t, y, t1, Guess::Poly(poly))?;
            let change = (corrected.y1 - att.y1).abs();
            let scale = control.abs_tol + control.rel_tol * y.abs().max(att.y1.abs());
            if !fixed && !(change <= scale) {
                solver.stats.corrections += 1;
                h = 0.5 * dt;
                if h < control.min_step {
                    traj.blow_up = true;
                    break;
                }
                continue;
            }
            att = corrected;
        }

        let err = att.err / (control.abs_tol + control.rel_tol * y.abs().max(att.y1.abs()));
        if !fixed && !(err <= 1.0) {
            solver.stats.rejected += 1;
            let factor = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.2 };
            h = dt * factor;
            if h < control.min_step {
                traj.blow_up = true;
                break;
            }
            continue;
        }

        let seg = Segment::from_stages(t, t1, y, att.y1, &att.k);
        solver.segments.push(seg);
        solver.stats.accepted += 1;
        traj.positivity_floor = traj.positivity_floor.min(att.y1).min(seg.eval(t + 0.5 * dt));
        if att.y1 < -10.0 * control.abs_tol {
            traj.negativity_violations += 1;
        }
        t = t1;
        y = att.y1;
        if !(y.abs() <= control.overflow_guard) {
            traj.blow_up = true;
            break;
        }
        if !fixed {
            let factor = if err > 0.0 { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) } else { 5.0 };
            h = if hits { h.max(dt * factor) } else { dt * factor };
        }
    }
    traj.segments = solver.segments;
    traj.stats = solver.stats;
    Ok(traj)
}
