//! Model description: production terms, mortality, delays and histories.

mod catalog;
mod config;
mod delay;
mod history;
mod terms;
mod time;

pub use catalog::{
    catalog_entry, catalog_labels, make_eq7a, make_eq7b, make_eq7c, make_example1, make_linear_multi_delay,
    make_mackey_glass, make_mackey_glass_multi, make_mg_unbounded, make_nicholson_multi, make_product_delay,
    make_sine_mg, CatalogEntry, Example1, LnRational, MgUnbounded,
};
pub use config::{CoefficientConfig, DelayConfig, HistoryConfig, ModelConfig, ModelFile};
pub use delay::{DelayKind, DelaySpec};
pub use history::HistorySpec;
pub use terms::{LinearMajorant, Monotonicity, MortalityTerm, PointwiseMajorant, ProductionTerm};
pub use time::{TimeFunction, TimePoint};

use crate::error::{Error, Result};

const U_GRID: [f64; 10] = [0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 200.0];

#[derive(Clone, Debug)]
pub struct ModelSpec {
    label: String,
    terms: Vec<ProductionTerm>,
    delays: Vec<DelaySpec>,
    mortality: MortalityTerm,
    source: Option<ModelConfig>,
}

impl ModelSpec {
    /// Builds and validates a model on sampled grids.
    pub fn new(
        label: impl Into<String>,
        terms: Vec<ProductionTerm>,
        delays: Vec<DelaySpec>,
        mortality: MortalityTerm,
    ) -> Result<Self> {
        let m = ModelSpec { label: label.into(), terms, delays, mortality, source: None };
        m.validate()?;
        Ok(m)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_source(mut self, source: ModelConfig) -> Self {
        self.source = Some(source);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn terms(&self) -> &[ProductionTerm] {
        &self.terms
    }

    pub fn delays(&self) -> &[DelaySpec] {
        &self.delays
    }

    pub fn mortality(&self) -> &MortalityTerm {
        &self.mortality
    }

    pub fn source(&self) -> Option<&ModelConfig> {
        self.source.as_ref()
    }

    pub fn arity(&self) -> usize {
        self.delays.len()
    }

    pub fn production(&self, at: impl Into<TimePoint>, args: &[f64]) -> f64 {
        let at = at.into();
        self.terms.iter().map(|f| f.eval(at, args)).sum()
    }

    pub fn rhs(&self, at: impl Into<TimePoint>, args: &[f64], x: f64) -> f64 {
        let at = at.into();
        self.production(at, args) - self.mortality.eval(at, x)
    }

    /// Largest delay bound, or `None` if some delay is unbounded.
    pub fn max_lag(&self) -> Option<f64> {
        self.delays.iter().try_fold(0.0f64, |acc, d| d.bound().map(|tau| acc.max(tau)))
    }

    /// Coefficient jumps of all terms in `(lo, hi]`.
    pub fn coefficient_jumps(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.terms
            .iter()
            .flat_map(|f| f.coefficients())
            .chain(self.mortality.coefficients())
            .flat_map(|c| c.jumps_in(lo, hi))
            .collect()
    }

    /// Monotonicity of the total production in each argument.
    pub fn combined_monotonicity(&self) -> Vec<Monotonicity> {
        (0..self.arity())
            .map(|j| {
                let tags: Vec<_> = self.terms.iter().map(|f| f.monotonicity()[j]).collect();
                let all = |ok: &[Monotonicity]| tags.iter().all(|t| ok.contains(t));
                if all(&[Monotonicity::Independent]) {
                    Monotonicity::Independent
                } else if all(&[Monotonicity::Increasing, Monotonicity::Independent]) {
                    Monotonicity::Increasing
                } else if all(&[Monotonicity::Decreasing, Monotonicity::Independent]) {
                    Monotonicity::Decreasing
                } else {
                    Monotonicity::None
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let l = self.arity();
        if let Some(f) = self.terms.iter().find(|f| f.arity() != l) {
            return Err(Error::Invariant(format!("production term arity {} does not match {} delays", f.arity(), l)));
        }
        let zeros = vec![0.0; l];
        for i in 0..=100 {
            let t = i as f64;
            let f0 = self.production(t, &zeros);
            let g0 = self.mortality.eval(t, 0.0);
            if f0 != 0.0 || g0 != 0.0 {
                return Err(Error::Invariant(format!("f(t, 0) = {f0}, g(t, 0) = {g0} at t = {t}")));
            }
        }
        for i in 0..=1000 {
            let t = i as f64 * 0.1;
            for d in &self.delays {
                let h = d.eval(t);
                let tol = 1e-12 * (1.0 + t.abs());
                if !(h <= t + tol) {
                    return Err(Error::Invariant(format!("delay h({t}) = {h} exceeds t")));
                }
                if let Some(tau) = d.bound() {
                    if h < t - tau - tol {
                        return Err(Error::Invariant(format!("delay h({t}) = {h} below t - {tau}")));
                    }
                }
            }
        }
        for i in 0..10 {
            let t = 5.3 * i as f64;
            for &u in &U_GRID {
                let patterns = [
                    vec![u; l],
                    (0..l).map(|j| if j % 2 == 0 { u } else { 0.0 }).collect(),
                    (0..l).map(|j| if j % 2 == 0 { 0.0 } else { u }).collect(),
                ];
                for args in &patterns {
                    for f in &self.terms {
                        let v = f.eval(t, args);
                        if !(v >= 0.0) {
                            return Err(Error::Invariant(format!("f(t = {t}, {args:?}) = {v} is negative")));
                        }
                    }
                }
                let g = self.mortality.eval(t, u);
                if !(g >= 0.0) {
                    return Err(Error::Invariant(format!("g(t = {t}, {u}) = {g} is negative")));
                }
                if let Some((beta, big_b)) = self.mortality.two_sided_linear() {
                    let tol = 1e-9 * (1.0 + g.abs());
                    if g < beta * u - tol || g > big_b * u + tol {
                        return Err(Error::Invariant(format!("g(t = {t}, {u}) = {g} outside [{beta} u, {big_b} u]")));
                    }
                }
                self.check_monotonicity(t, u)?;
            }
        }
        Ok(())
    }

    fn check_monotonicity(&self, t: f64, u: f64) -> Result<()> {
        const DELTA: f64 = 1e-4;
        let base = vec![u; self.arity()];
        for (k, f) in self.terms.iter().enumerate() {
            let f0 = f.eval(t, &base);
            for (j, tag) in f.monotonicity().iter().enumerate() {
                let mut bumped = base.clone();
                bumped[j] += DELTA;
                let diff = f.eval(t, &bumped) - f0;
                let tol = 1e-9 * (1.0 + f0.abs());
                let ok = match tag {
                    Monotonicity::Increasing => diff >= -tol,
                    Monotonicity::Decreasing => diff <= tol,
                    Monotonicity::Independent => diff.abs() <= tol,
                    Monotonicity::None => true,
                };
                if !ok {
                    return Err(Error::Invariant(format!(
                        "term {k} is not {tag:?} in argument {j} at t = {t}, u = {u}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple(tag: Monotonicity, f: impl Fn(TimePoint, &[f64]) -> f64 + Send + Sync + 'static) -> Result<ModelSpec> {
        ModelSpec::new(
            "t",
            vec![ProductionTerm::new(vec![tag], f)],
            vec![DelaySpec::lag(1.0).unwrap()],
            MortalityTerm::new(|_, u| u),
        )
    }

    #[test]
    fn rejects_nonzero_at_origin() {
        assert!(simple(Monotonicity::Increasing, |_, u| u[0] + 1.0).is_err());
    }

    #[test]
    fn rejects_wrong_tag() {
        assert!(simple(Monotonicity::Decreasing, |_, u| 2.0 * u[0]).is_err());
        assert!(simple(Monotonicity::Increasing, |_, u| 2.0 * u[0]).is_ok());
    }

    #[test]
    fn rejects_negative_production() {
        assert!(simple(Monotonicity::None, |_, u| -u[0]).is_err());
    }

    #[test]
    fn rejects_future_delay() {
        let m = ModelSpec::new(
            "t",
            vec![ProductionTerm::new(vec![Monotonicity::Increasing], |_, u| u[0])],
            vec![DelaySpec::custom(|t| t + 0.5, DelayKind::Unbounded)],
            MortalityTerm::new(|_, u| u),
        );
        assert!(m.is_err());
    }

    #[test]
    fn combined_tags() {
        let m = make_mackey_glass_multi(
            vec![TimeFunction::constant(1.0), TimeFunction::constant(1.0)],
            vec![2.0, 0.0],
            vec![DelaySpec::lag(1.0).unwrap(), DelaySpec::lag(2.0).unwrap()],
            vec![DelaySpec::lag(0.5).unwrap(), DelaySpec::lag(0.5).unwrap()],
            TimeFunction::constant(2.0),
            TimeFunction::constant(1.0),
            1.0,
        )
        .unwrap();
        use Monotonicity::*;
        assert_eq!(m.combined_monotonicity(), vec![Increasing, Decreasing, Increasing, Independent]);
        assert_eq!(m.max_lag(), Some(2.0));
    }
}
