use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eventual bounds `lower <= liminf x <= limsup x <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub m: f64,
    pub mu: f64,
    /// Pointwise production bound.
    pub a: f64,
    /// Upper mortality slope.
    pub b: f64,
    pub tau: f64,
    pub upper: f64,
    pub lower: f64,
}

impl Envelope {
    /// `upper = m exp(2 (a + b) tau)`, `lower = mu exp(-2 b tau)`.
    pub fn new(m: f64, mu: f64, a: f64, b: f64, tau: f64) -> Result<Self> {
        if !(m > 0.0 && mu > 0.0 && a >= 0.0 && b > 0.0 && tau >= 0.0) {
            return Err(Error::Precondition(format!(
                "envelope needs m, mu, b > 0 and a, tau >= 0 (m = {m}, mu = {mu}, a = {a}, b = {b}, tau = {tau})"
            )));
        }
        let upper = m * (2.0 * (a + b) * tau).exp();
        let lower = mu * (-2.0 * b * tau).exp();
        if !(upper.is_finite() && lower > 0.0) {
            return Err(Error::Precondition("envelope bounds overflow".into()));
        }
        Ok(Envelope { m, mu, a, b, tau, upper, lower })
    }

    /// Whether `[inf, sup]` lies inside the envelope up to multiplicative `slack`.
    pub fn contains(&self, inf: f64, sup: f64, slack: f64) -> bool {
        inf >= self.lower * (1.0 - slack) && sup <= self.upper * (1.0 + slack)
    }
}
