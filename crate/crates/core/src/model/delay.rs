//! Delay functions `h_j(t) <= t`.

use std::fmt;
use std::sync::Arc;

use super::time::{ScalarFn, TimePoint};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DelayKind {
    /// `t - tau <= h(t) <= t`.
    Bounded(f64),
    Unbounded,
}

#[derive(Clone)]
enum DelayFn {
    Lag(f64),
    /// `h(t) = n * period + shifts[i]` for `t - n * period` in `[offsets[i], offsets[i + 1])`.
    Lattice {
        period: f64,
        offsets: Vec<f64>,
        shifts: Vec<f64>,
    },
    /// `h(t) = values[i]` on `[breaks[i], breaks[i + 1])`, last value held.
    Steps {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
    Custom(ScalarFn),
}

#[derive(Clone)]
pub struct DelaySpec {
    kind: DelayKind,
    func: DelayFn,
}

impl DelaySpec {
    /// `h(t) = t - tau`.
    pub fn lag(tau: f64) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(invalid("tau", format!("lag must be finite and nonnegative, got {tau}")));
        }
        Ok(DelaySpec { kind: DelayKind::Bounded(tau), func: DelayFn::Lag(tau) })
    }

    /// `h(t) = t`.
    pub fn current() -> Self {
        DelaySpec { kind: DelayKind::Bounded(0.0), func: DelayFn::Lag(0.0) }
    }

    pub fn lattice(period: f64, offsets: Vec<f64>, shifts: Vec<f64>, kind: DelayKind) -> Result<Self> {
        if !(period > 0.0) {
            return Err(invalid("period", "must be positive"));
        }
        if offsets.is_empty() || offsets.len() != shifts.len() || offsets[0] != 0.0 {
            return Err(invalid("offsets", "need matching offsets/shifts starting at 0"));
        }
        if offsets.windows(2).any(|w| w[0] >= w[1]) || *offsets.last().unwrap() >= period {
            return Err(invalid("offsets", "must increase within one period"));
        }
        if offsets.iter().zip(&shifts).any(|(o, s)| s > o) {
            return Err(invalid("shifts", "delay would exceed current time"));
        }
        Ok(DelaySpec { kind, func: DelayFn::Lattice { period, offsets, shifts } })
    }

    pub fn steps(breaks: Vec<f64>, values: Vec<f64>, kind: DelayKind) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != values.len() {
            return Err(invalid("steps", "need one value per break"));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("steps", "breaks must be strictly increasing"));
        }
        if breaks.iter().zip(&values).any(|(b, v)| v > b) {
            return Err(invalid("steps", "delay would exceed current time"));
        }
        Ok(DelaySpec { kind, func: DelayFn::Steps { breaks, values } })
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static, kind: DelayKind) -> Self {
        DelaySpec { kind, func: DelayFn::Custom(Arc::new(f)) }
    }

    pub fn kind(&self) -> DelayKind {
        self.kind
    }

    pub fn bound(&self) -> Option<f64> {
        match self.kind {
            DelayKind::Bounded(tau) => Some(tau),
            DelayKind::Unbounded => None,
        }
    }

    pub fn constant_lag(&self) -> Option<f64> {
        match self.func {
            DelayFn::Lag(tau) => Some(tau),
            _ => None,
        }
    }

    pub fn is_current(&self) -> bool {
        matches!(self.func, DelayFn::Lag(tau) if tau == 0.0)
    }

    pub fn table(&self) -> Option<(&[f64], &[f64])> {
        match &self.func {
            DelayFn::Steps { breaks, values } => Some((breaks, values)),
            _ => None,
        }
    }

    pub fn eval(&self, at: impl Into<TimePoint>) -> f64 {
        let at = at.into();
        match &self.func {
            DelayFn::Lag(tau) => at.t - tau,
            DelayFn::Lattice { period, offsets, shifts } => {
                let n = (at.anchor() / period).floor();
                let r = at.anchor() - n * period;
                let i = offsets.partition_point(|&o| o <= r).max(1) - 1;
                n * period + shifts[i]
            }
            DelayFn::Steps { breaks, values } => {
                let i = breaks.partition_point(|&b| b <= at.anchor()).max(1) - 1;
                values[i]
            }
            DelayFn::Custom(f) => f(at.t),
        }
    }

    /// Times in `(lo, hi]` where `h` jumps.
    pub fn breakpoints_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        match &self.func {
            DelayFn::Lattice { period, offsets, .. } => {
                let mut out = Vec::new();
                let mut n = (lo / period).floor().max(0.0);
                while n * period <= hi {
                    for &o in offsets {
                        let t = n * period + o;
                        if t > lo && t <= hi {
                            out.push(t);
                        }
                    }
                    n += 1.0;
                }
                out
            }
            DelayFn::Steps { breaks, .. } => breaks.iter().copied().filter(|&b| b > lo && b <= hi).collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Debug for DelaySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let func = match &self.func {
            DelayFn::Lag(tau) => format!("Lag({tau})"),
            DelayFn::Lattice { period, offsets, shifts } => {
                format!("Lattice {{ period: {period}, offsets: {offsets:?}, shifts: {shifts:?} }}")
            }
            DelayFn::Steps { breaks, values } => format!("Steps {{ breaks: {breaks:?}, values: {values:?} }}"),
            DelayFn::Custom(_) => "Custom".to_string(),
        };
        write!(f, "DelaySpec {{ kind: {:?}, func: {func} }}", self.kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_pieces() {
        let d = DelaySpec::lattice(3.0, vec![0.0, 1.0], vec![-1.0, -3.0], DelayKind::Bounded(6.0)).unwrap();
        assert_eq!(d.eval(0.0), -1.0);
        assert_eq!(d.eval(0.5), -1.0);
        assert_eq!(d.eval(1.0), -3.0);
        assert_eq!(d.eval(3.5), 2.0);
        assert_eq!(d.eval(TimePoint::in_step(4.0, 3.9)), 2.0);
        assert_eq!(d.breakpoints_in(0.0, 6.0), vec![1.0, 3.0, 4.0, 6.0]);
    }

    #[test]
    fn lag_rejects_negative() {
        assert!(DelaySpec::lag(-0.1).is_err());
        assert!(DelaySpec::lag(0.0).unwrap().is_current());
    }

    #[test]
    fn steps_hold_last_value() {
        let d = DelaySpec::steps(vec![0.0, 2.0], vec![-1.0, 0.0], DelayKind::Unbounded).unwrap();
        assert_eq!(d.eval(1.0), -1.0);
        assert_eq!(d.eval(50.0), 0.0);
    }
}
