//! Time-dependent coefficients.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};

/// An evaluation instant together with the anchor that selects the piece of
/// piecewise-constant functions.
///
/// Inside an integration step the anchor is the step midpoint, so every stage
/// of a step that ends on a jump sees the piece the step lies in. Outside the
/// integrator the anchor equals `t` and pieces are right-continuous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePoint {
    pub t: f64,
    anchor: f64,
}

impl TimePoint {
    pub fn new(t: f64) -> Self {
        TimePoint { t, anchor: t }
    }

    pub fn in_step(t: f64, anchor: f64) -> Self {
        TimePoint { t, anchor }
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }
}

impl From<f64> for TimePoint {
    fn from(t: f64) -> Self {
        TimePoint::new(t)
    }
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A nonnegative coefficient `c(t)` with known bounds.
#[derive(Clone)]
pub enum TimeFunction {
    Constant(f64),
    /// `values[0]` before `breaks[0]`, `values[i + 1]` on `[breaks[i], breaks[i + 1])`.
    Steps {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
    /// A continuous function with declared bounds.
    Custom {
        f: ScalarFn,
        inf: f64,
        sup: f64,
    },
}

impl TimeFunction {
    pub fn constant(c: f64) -> Self {
        TimeFunction::Constant(c)
    }

    pub fn steps(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(invalid("steps", "need exactly one more value than breaks"));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("steps", "breaks must be strictly increasing"));
        }
        if values.iter().chain(&breaks).any(|v| !v.is_finite()) {
            return Err(invalid("steps", "non-finite entry"));
        }
        Ok(TimeFunction::Steps { breaks, values })
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static, inf: f64, sup: f64) -> Self {
        TimeFunction::Custom { f: Arc::new(f), inf, sup }
    }

    pub fn eval(&self, at: impl Into<TimePoint>) -> f64 {
        let at = at.into();
        match self {
            TimeFunction::Constant(c) => *c,
            TimeFunction::Steps { breaks, values } => values[breaks.partition_point(|&b| b <= at.anchor())],
            TimeFunction::Custom { f, .. } => f(at.t),
        }
    }

    pub fn inf(&self) -> f64 {
        match self {
            TimeFunction::Constant(c) => *c,
            TimeFunction::Steps { values, .. } => values.iter().copied().fold(f64::INFINITY, f64::min),
            TimeFunction::Custom { inf, .. } => *inf,
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            TimeFunction::Constant(c) => *c,
            TimeFunction::Steps { values, .. } => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            TimeFunction::Custom { sup, .. } => *sup,
        }
    }

    /// Jump times in `(lo, hi]`.
    pub fn jumps_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            TimeFunction::Steps { breaks, .. } => breaks.iter().copied().filter(|&b| b > lo && b <= hi).collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, TimeFunction::Constant(_))
    }
}

impl fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeFunction::Constant(c) => write!(f, "Constant({c})"),
            TimeFunction::Steps { breaks, values } => {
                write!(f, "Steps {{ breaks: {breaks:?}, values: {values:?} }}")
            }
            TimeFunction::Custom { inf, sup, .. } => write!(f, "Custom {{ inf: {inf}, sup: {sup} }}"),
        }
    }
}
