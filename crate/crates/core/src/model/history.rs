use std::fmt;
use std::sync::Arc;

use super::time::ScalarFn;
use crate::error::{invalid, Error, Result};

/// Initial function `phi` on `(-inf, 0]`.
#[derive(Clone)]
pub struct HistorySpec {
    eval: ScalarFn,
    inf_bound: f64,
    sup_bound: f64,
    support_depth: Option<f64>,
    description: String,
}

impl HistorySpec {
    pub fn constant(c: f64) -> Result<Self> {
        HistorySpec::from_fn(move |_| c, c, c, None, format!("constant {c}"))
    }

    /// `phi` must be nonnegative on `[-depth, 0]` and bounded by `sup`.
    pub fn from_fn(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inf: f64,
        sup: f64,
        support_depth: Option<f64>,
        description: impl Into<String>,
    ) -> Result<Self> {
        let h = HistorySpec {
            eval: Arc::new(f),
            inf_bound: inf,
            sup_bound: sup,
            support_depth,
            description: description.into(),
        };
        h.validate()?;
        Ok(h)
    }

    /// Piecewise-linear interpolation of `(t, x)` samples, held constant left of the first one.
    pub fn piecewise_linear(ts: Vec<f64>, xs: Vec<f64>) -> Result<Self> {
        if ts.is_empty() || ts.len() != xs.len() {
            return Err(invalid("history", "need matching nonempty t and x samples"));
        }
        if ts.windows(2).any(|w| w[0] >= w[1]) || *ts.last().unwrap() != 0.0 {
            return Err(invalid("history", "sample times must increase and end at 0"));
        }
        let inf = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let sup = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let depth = -ts[0];
        let desc = format!("piecewise linear, {} samples on [{}, 0]", ts.len(), ts[0]);
        let f = move |s: f64| {
            if s <= ts[0] {
                return xs[0];
            }
            let i = ts.partition_point(|&t| t <= s).min(ts.len() - 1);
            let (t0, t1) = (ts[i - 1], ts[i]);
            let w = ((s - t0) / (t1 - t0)).clamp(0.0, 1.0);
            xs[i - 1] * (1.0 - w) + xs[i] * w
        };
        HistorySpec::from_fn(f, inf, sup, Some(depth), desc)
    }

    fn validate(&self) -> Result<()> {
        let x0 = self.eval(0.0);
        if !(x0 > 0.0) {
            return Err(Error::Invariant(format!("history must satisfy phi(0) > 0, got {x0}")));
        }
        if !(self.inf_bound >= 0.0 && self.sup_bound.is_finite() && self.inf_bound <= self.sup_bound) {
            return Err(invalid("history", "bounds must satisfy 0 <= inf <= sup < inf"));
        }
        let depth = self.support_depth.unwrap_or(10.0);
        for i in 0..=200 {
            let s = -depth * i as f64 / 200.0;
            let v = self.eval(s);
            let tol = 1e-12 * (1.0 + self.sup_bound);
            if !(v >= self.inf_bound - tol && v <= self.sup_bound + tol) {
                return Err(Error::Invariant(format!("history value {v} at {s} outside declared bounds")));
            }
        }
        Ok(())
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.eval)(s)
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn inf_bound(&self) -> f64 {
        self.inf_bound
    }

    pub fn support_depth(&self) -> Option<f64> {
        self.support_depth
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Debug for HistorySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HistorySpec({})", self.description)
    }
}
