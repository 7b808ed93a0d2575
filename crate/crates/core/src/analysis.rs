//! Qualitative classification of computed trajectories.

use serde::{Deserialize, Serialize};

use crate::criteria::Envelope;
use crate::error::{Error, Result};
use crate::integrator::Trajectory;

const MIN_SAMPLES: usize = 10_000;

/// Samples on `[lo, hi]`: a uniform grid merged with every mesh node inside.
fn window_samples(traj: &Trajectory, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut pts = traj.sample(lo, hi, MIN_SAMPLES);
    pts.extend(traj.mesh().into_iter().filter(|&(t, _)| t >= lo && t <= hi));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

fn tail_start(traj: &Trajectory, tail_fraction: f64) -> Result<f64> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::Precondition(format!("tail fraction must lie in (0, 1], got {tail_fraction}")));
    }
    let t_final = traj.t_final();
    if !(t_final > 0.0) {
        return Err(Error::Precondition("trajectory is empty".into()));
    }
    Ok(t_final * (1.0 - tail_fraction))
}

/// Minimum and maximum of `x` over the last `tail_fraction` of the computed interval.
pub fn tail_extrema(traj: &Trajectory, tail_fraction: f64) -> Result<(f64, f64)> {
    let lo = tail_start(traj, tail_fraction)?;
    let pts = window_samples(traj, lo, traj.t_final());
    let inf = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let sup = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok((inf, sup))
}

/// `max |x(t) - x(t - period)|` over the last `window` time units.
pub fn period_residual(traj: &Trajectory, period: f64, window: f64) -> Result<f64> {
    let hi = traj.t_final();
    let lo = hi - window;
    if !(period > 0.0 && window > 0.0) || lo - period < 0.0 {
        return Err(Error::Precondition(format!(
            "need period, window > 0 and window + period <= t_final ({hi}), got period {period}, window {window}"
        )));
    }
    Ok(window_samples(traj, lo, hi).into_iter().map(|(t, x)| (x - traj.value(t - period)).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthFlag {
    Growing,
    BoundedEvidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProbe {
    pub thresholds: Vec<f64>,
    /// First time `x` reaches each threshold.
    pub crossings: Vec<Option<f64>>,
    pub flag: GrowthFlag,
}

fn first_crossing(traj: &Trajectory, level: f64) -> Option<f64> {
    if traj.value(0.0) >= level {
        return Some(0.0);
    }
    for seg in traj.segments() {
        let n = 8;
        let mut prev = seg.t0;
        for i in 1..=n {
            let t = if i == n { seg.t1 } else { seg.t0 + (seg.t1 - seg.t0) * i as f64 / n as f64 };
            if seg.eval(t) >= level {
                let (mut a, mut b) = (prev, t);
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if seg.eval(m) >= level {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                return Some(b);
            }
            prev = t;
        }
    }
    None
}

/// First-passage times through increasing thresholds.
pub fn growth_probe(traj: &Trajectory, thresholds: &[f64]) -> GrowthProbe {
    let crossings: Vec<Option<f64>> = thresholds.iter().map(|&l| first_crossing(traj, l)).collect();
    let crossed = crossings.iter().filter(|c| c.is_some()).count();
    let all = !thresholds.is_empty() && crossed == thresholds.len();
    let flag = if all || (traj.blow_up() && crossed > 0) {
        GrowthFlag::Growing
    } else if crossed == 0 && !traj.blow_up() {
        GrowthFlag::BoundedEvidence
    } else {
        GrowthFlag::Inconclusive
    };
    GrowthProbe { thresholds: thresholds.to_vec(), crossings, flag }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub tail_fraction: f64,
    pub thresholds: Vec<f64>,
    pub period: Option<f64>,
    /// Multiplicative slack of the envelope containment test.
    pub envelope_slack: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { tail_fraction: 0.5, thresholds: vec![10.0, 1e2, 1e3], period: None, envelope_slack: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeCheck {
    pub envelope: Envelope,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub model: String,
    pub t_final: f64,
    pub blow_up: bool,
    pub tail_inf: f64,
    pub tail_sup: f64,
    pub period_residual: Option<f64>,
    pub growth: GrowthProbe,
    pub envelope: Option<EnvelopeCheck>,
}

pub fn classify(
    traj: &Trajectory,
    envelope: Option<&Envelope>,
    options: &ClassifyOptions,
) -> Result<ClassificationResult> {
    let (tail_inf, tail_sup) = tail_extrema(traj, options.tail_fraction)?;
    let window = traj.t_final() * options.tail_fraction;
    let period_residual = match options.period {
        Some(p) if window + p <= traj.t_final() => Some(period_residual(traj, p, window)?),
        Some(p) => Some(period_residual(traj, p, traj.t_final() - p)?),
        None => None,
    };
    Ok(ClassificationResult {
        model: traj.label().to_string(),
        t_final: traj.t_final(),
        blow_up: traj.blow_up(),
        tail_inf,
        tail_sup,
        period_residual,
        growth: growth_probe(traj, &options.thresholds),
        envelope: envelope
            .map(|e| EnvelopeCheck { envelope: *e, inside: e.contains(tail_inf, tail_sup, options.envelope_slack) }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{integrate, StepControl};
    use crate::model::{make_linear_multi_delay, DelaySpec, HistorySpec, TimeFunction};

    fn run(a: f64, horizon: f64) -> Trajectory {
        let m = make_linear_multi_delay(
            vec![TimeFunction::constant(a)],
            vec![DelaySpec::lag(1.0).unwrap()],
            TimeFunction::constant(1.0),
        )
        .unwrap();
        integrate(&m, &HistorySpec::constant(1.0).unwrap(), horizon, &StepControl::default()).unwrap()
    }

    #[test]
    fn decay_tail() {
        let tr = run(0.0, 10.0);
        let (lo, hi) = tail_extrema(&tr, 0.5).unwrap();
        assert!((lo - (-10f64).exp()).abs() < 1e-9);
        assert!((hi - (-5f64).exp()).abs() < 1e-9);
        assert!(tail_extrema(&tr, 0.0).is_err());
    }

    #[test]
    fn crossing_times_of_growth() {
        let tr = run(2.0, 30.0);
        let p = growth_probe(&tr, &[10.0, 100.0]);
        assert_eq!(p.flag, GrowthFlag::Growing);
        let t10 = p.crossings[0].unwrap();
        assert!((tr.value(t10) - 10.0).abs() < 1e-9);
        assert_eq!(growth_probe(&run(0.0, 5.0), &[10.0]).flag, GrowthFlag::BoundedEvidence);
    }

    #[test]
    fn residual_needs_room() {
        let tr = run(0.0, 5.0);
        assert!(period_residual(&tr, 3.0, 3.0).is_err());
    }
}
