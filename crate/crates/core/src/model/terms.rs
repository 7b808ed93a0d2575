use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::time::{TimeFunction, TimePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    /// The term does not depend on this argument.
    Independent,
    None,
}

pub type TermFn = Arc<dyn Fn(TimePoint, &[f64]) -> f64 + Send + Sync>;
pub type MortalityFn = Arc<dyn Fn(TimePoint, f64) -> f64 + Send + Sync>;
pub type LipschitzFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `f(t, u) <= sum_j slopes[j](t) * u_j + constant`.
#[derive(Debug, Clone)]
pub struct LinearMajorant {
    pub slopes: Vec<TimeFunction>,
    pub constant: f64,
}

impl LinearMajorant {
    pub fn eval(&self, at: TimePoint, args: &[f64]) -> f64 {
        self.slopes.iter().zip(args).map(|(a, u)| a.eval(at) * u).sum::<f64>() + self.constant
    }

    pub fn slope_sum(&self, at: TimePoint) -> f64 {
        self.slopes.iter().map(|a| a.eval(at)).sum()
    }

    pub fn is_constant_bound(&self) -> bool {
        self.slopes.iter().all(|a| a.is_constant() && a.sup() == 0.0)
    }
}

/// `f(t, u) <= bound * u[arg]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseMajorant {
    pub arg: usize,
    pub bound: f64,
}

#[derive(Clone)]
pub struct ProductionTerm {
    eval: TermFn,
    monotonicity: Vec<Monotonicity>,
    linear_majorant: Option<LinearMajorant>,
    pointwise_majorant: Option<PointwiseMajorant>,
    coefficients: Vec<TimeFunction>,
}

impl ProductionTerm {
    pub fn new(monotonicity: Vec<Monotonicity>, f: impl Fn(TimePoint, &[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ProductionTerm {
            eval: Arc::new(f),
            monotonicity,
            linear_majorant: None,
            pointwise_majorant: None,
            coefficients: Vec::new(),
        }
    }

    pub fn with_linear_majorant(mut self, m: LinearMajorant) -> Self {
        self.linear_majorant = Some(m);
        self
    }

    pub fn with_pointwise_majorant(mut self, m: PointwiseMajorant) -> Self {
        self.pointwise_majorant = Some(m);
        self
    }

    /// Registers coefficients whose jumps become integration breakpoints.
    pub fn with_coefficients(mut self, c: Vec<TimeFunction>) -> Self {
        self.coefficients = c;
        self
    }

    pub fn eval(&self, at: impl Into<TimePoint>, args: &[f64]) -> f64 {
        (self.eval)(at.into(), args)
    }

    pub fn arity(&self) -> usize {
        self.monotonicity.len()
    }

    pub fn monotonicity(&self) -> &[Monotonicity] {
        &self.monotonicity
    }

    pub fn linear_majorant(&self) -> Option<&LinearMajorant> {
        self.linear_majorant.as_ref()
    }

    pub fn pointwise_majorant(&self) -> Option<PointwiseMajorant> {
        self.pointwise_majorant
    }

    pub fn coefficients(&self) -> &[TimeFunction] {
        &self.coefficients
    }
}

impl fmt::Debug for ProductionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProductionTerm")
            .field("monotonicity", &self.monotonicity)
            .field("linear_majorant", &self.linear_majorant)
            .field("pointwise_majorant", &self.pointwise_majorant)
            .finish_non_exhaustive()
    }
}

#[derive(Clone)]
pub struct MortalityTerm {
    eval: MortalityFn,
    lower_linear: Option<TimeFunction>,
    two_sided_linear: Option<(f64, f64)>,
    lipschitz: Option<LipschitzFn>,
    coefficients: Vec<TimeFunction>,
}

impl MortalityTerm {
    pub fn new(g: impl Fn(TimePoint, f64) -> f64 + Send + Sync + 'static) -> Self {
        MortalityTerm {
            eval: Arc::new(g),
            lower_linear: None,
            two_sided_linear: None,
            lipschitz: None,
            coefficients: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        MortalityTerm::new(|_, _| 0.0)
    }

    /// `g(t, u) >= a0(t) * u`.
    pub fn with_lower_linear(mut self, a0: TimeFunction) -> Self {
        self.lower_linear = Some(a0);
        self
    }

    /// `beta * u <= g(t, u) <= big_b * u`.
    pub fn with_two_sided_linear(mut self, beta: f64, big_b: f64) -> Self {
        self.two_sided_linear = Some((beta, big_b));
        self
    }

    /// Lipschitz constant of `g(t, .)` on `[lo, hi]`.
    pub fn with_lipschitz(mut self, l: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.lipschitz = Some(Arc::new(l));
        self
    }

    pub fn with_coefficients(mut self, c: Vec<TimeFunction>) -> Self {
        self.coefficients = c;
        self
    }

    pub fn eval(&self, at: impl Into<TimePoint>, u: f64) -> f64 {
        (self.eval)(at.into(), u)
    }

    pub fn lower_linear(&self) -> Option<&TimeFunction> {
        self.lower_linear.as_ref()
    }

    pub fn two_sided_linear(&self) -> Option<(f64, f64)> {
        self.two_sided_linear
    }

    pub fn lipschitz(&self, lo: f64, hi: f64) -> Option<f64> {
        self.lipschitz.as_ref().map(|l| l(lo, hi))
    }

    pub fn coefficients(&self) -> &[TimeFunction] {
        &self.coefficients
    }
}

impl fmt::Debug for MortalityTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MortalityTerm")
            .field("lower_linear", &self.lower_linear)
            .field("two_sided_linear", &self.two_sided_linear)
            .finish_non_exhaustive()
    }
}
