//! Constructors for the standard population models and the named examples.

use super::config::{CoefficientConfig, DelayConfig, ModelConfig};
use super::{
    DelayKind, DelaySpec, HistorySpec, LinearMajorant, ModelSpec, Monotonicity, MortalityTerm, PointwiseMajorant,
    ProductionTerm, TimeFunction,
};
use crate::error::{invalid, Error, Result};
use crate::integrator::StepControl;

use Monotonicity::{Decreasing, Increasing, Independent};

fn nonneg(name: &str, c: &TimeFunction) -> Result<()> {
    if !(c.inf() >= 0.0 && c.sup().is_finite()) {
        return Err(invalid(name, format!("coefficient must be nonnegative and bounded, got {c:?}")));
    }
    Ok(())
}

fn check_len(name: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(invalid(name, format!("expected {want} entries, got {got}")));
    }
    Ok(())
}

fn sampled_inf(c: impl Fn(f64) -> f64) -> f64 {
    (0..=2000).map(|i| c(i as f64 * 0.1)).fold(f64::INFINITY, f64::min)
}

fn coef_configs(cs: &[TimeFunction]) -> Option<Vec<CoefficientConfig>> {
    cs.iter().map(CoefficientConfig::from_function).collect()
}

fn delay_configs(ds: &[DelaySpec]) -> Option<Vec<DelayConfig>> {
    ds.iter().map(DelayConfig::from_delay).collect()
}

fn attach(model: ModelSpec, source: Option<ModelConfig>) -> ModelSpec {
    match source {
        Some(s) => model.with_source(s),
        None => model,
    }
}

fn linear_mortality(b: TimeFunction) -> MortalityTerm {
    let (bc, bsup) = (b.clone(), b.sup());
    let mut g = MortalityTerm::new(move |t, u| bc.eval(t) * u)
        .with_lower_linear(b.clone())
        .with_lipschitz(move |_, _| bsup)
        .with_coefficients(vec![b.clone()]);
    if b.inf() > 0.0 {
        g = g.with_two_sided_linear(b.inf(), b.sup());
    }
    g
}

/// `x' = a(t) x(h(t)) / (1 + x(p(t))^n) - b(t) x(t)`.
pub fn make_mackey_glass(a: TimeFunction, n: f64, h: DelaySpec, p: DelaySpec, b: TimeFunction) -> Result<ModelSpec> {
    nonneg("a", &a)?;
    nonneg("b", &b)?;
    if !(n > 0.0 && n.is_finite()) {
        return Err(invalid("n", format!("exponent must be positive, got {n}")));
    }
    let source = (|| {
        Some(ModelConfig::MackeyGlass {
            a: CoefficientConfig::from_function(&a)?,
            b: CoefficientConfig::from_function(&b)?,
            n,
            h: DelayConfig::from_delay(&h)?,
            p: DelayConfig::from_delay(&p)?,
        })
    })();
    let ac = a.clone();
    let term = ProductionTerm::new(vec![Increasing, Decreasing], move |t, u| ac.eval(t) * u[0] / (1.0 + u[1].powf(n)))
        .with_linear_majorant(LinearMajorant { slopes: vec![a.clone(), TimeFunction::constant(0.0)], constant: 0.0 })
        .with_pointwise_majorant(PointwiseMajorant { arg: 0, bound: a.sup() })
        .with_coefficients(vec![a]);
    let model = ModelSpec::new("mackey-glass", vec![term], vec![h, p], linear_mortality(b))?;
    Ok(attach(model, source))
}

/// `x' = sum_k a_k(t) x(h_k(t)) / (1 + x(p_k(t))^{n_k}) - (b(t) - c(t) / (1 + x^n)) x`.
///
/// Argument slots alternate `h_0, p_0, h_1, p_1, ...`.
pub fn make_mackey_glass_multi(
    a: Vec<TimeFunction>,
    exponents: Vec<f64>,
    h: Vec<DelaySpec>,
    p: Vec<DelaySpec>,
    b: TimeFunction,
    c: TimeFunction,
    n: f64,
) -> Result<ModelSpec> {
    let m = a.len();
    check_len("exponents", exponents.len(), m)?;
    check_len("h", h.len(), m)?;
    check_len("p", p.len(), m)?;
    for ak in &a {
        nonneg("a", ak)?;
    }
    nonneg("b", &b)?;
    nonneg("c", &c)?;
    if exponents.iter().any(|&e| !(e >= 0.0)) || !(n >= 0.0) {
        return Err(invalid("n", "exponents must be nonnegative"));
    }
    let (bc, cc) = (b.clone(), c.clone());
    let beta = sampled_inf(|t| bc.eval(t) - cc.eval(t));
    if !(beta > 0.0) || sampled_inf(|t| cc.eval(t)) < 0.0 {
        return Err(invalid("b", format!("need b(t) >= c(t) >= 0 and b - c >= beta > 0, got inf(b - c) = {beta}")));
    }
    let source = (|| {
        Some(ModelConfig::MackeyGlassMulti {
            a: coef_configs(&a)?,
            exponents: exponents.clone(),
            h: delay_configs(&h)?,
            p: delay_configs(&p)?,
            b: CoefficientConfig::from_function(&b)?,
            c: CoefficientConfig::from_function(&c)?,
            n,
        })
    })();
    let arity = 2 * m;
    let terms = a
        .iter()
        .zip(&exponents)
        .enumerate()
        .map(|(k, (ak, &nk))| {
            let mut tags = vec![Independent; arity];
            tags[2 * k] = Increasing;
            if nk > 0.0 {
                tags[2 * k + 1] = Decreasing;
            }
            let mut slopes = vec![TimeFunction::constant(0.0); arity];
            slopes[2 * k] = ak.clone();
            let akc = ak.clone();
            ProductionTerm::new(tags, move |t, u| akc.eval(t) * u[2 * k] / (1.0 + u[2 * k + 1].powf(nk)))
                .with_linear_majorant(LinearMajorant { slopes, constant: 0.0 })
                .with_pointwise_majorant(PointwiseMajorant { arg: 2 * k, bound: ak.sup() })
                .with_coefficients(vec![ak.clone()])
        })
        .collect();
    let delays = h.into_iter().zip(p).flat_map(|(hk, pk)| [hk, pk]).collect();
    let lower = TimeFunction::custom(move |t| bc.eval(t) - cc.eval(t), beta, b.sup());
    let (bc, cc, bsup) = (b.clone(), c.clone(), b.sup());
    let g = MortalityTerm::new(move |t, u| (bc.eval(t) - cc.eval(t) / (1.0 + u.powf(n))) * u)
        .with_lower_linear(lower)
        .with_two_sided_linear(beta, bsup)
        .with_coefficients(vec![b, c]);
    let model = ModelSpec::new("mackey-glass-multi", terms, delays, g)?;
    Ok(attach(model, source))
}

/// `x' = sum_k a_k(t) x(h_k(t)) exp(-lambda_k x(g_k(t))) - b(t) x(t)`.
///
/// Argument slots alternate `h_0, g_0, h_1, g_1, ...`.
pub fn make_nicholson_multi(
    a: Vec<TimeFunction>,
    lambda: Vec<f64>,
    h: Vec<DelaySpec>,
    g: Vec<DelaySpec>,
    b: TimeFunction,
) -> Result<ModelSpec> {
    let m = a.len();
    check_len("lambda", lambda.len(), m)?;
    check_len("h", h.len(), m)?;
    check_len("g", g.len(), m)?;
    for ak in &a {
        nonneg("a", ak)?;
    }
    nonneg("b", &b)?;
    if lambda.iter().any(|&l| !(l > 0.0)) {
        return Err(invalid("lambda", "rates must be positive"));
    }
    let source = (|| {
        Some(ModelConfig::Nicholson {
            a: coef_configs(&a)?,
            lambda: lambda.clone(),
            h: delay_configs(&h)?,
            g: delay_configs(&g)?,
            b: CoefficientConfig::from_function(&b)?,
        })
    })();
    let arity = 2 * m;
    let terms = a
        .iter()
        .zip(&lambda)
        .enumerate()
        .map(|(k, (ak, &lk))| {
            let mut tags = vec![Independent; arity];
            tags[2 * k] = Increasing;
            tags[2 * k + 1] = Decreasing;
            let mut slopes = vec![TimeFunction::constant(0.0); arity];
            slopes[2 * k] = ak.clone();
            let akc = ak.clone();
            ProductionTerm::new(tags, move |t, u| akc.eval(t) * u[2 * k] * (-lk * u[2 * k + 1]).exp())
                .with_linear_majorant(LinearMajorant { slopes, constant: 0.0 })
                .with_pointwise_majorant(PointwiseMajorant { arg: 2 * k, bound: ak.sup() })
                .with_coefficients(vec![ak.clone()])
        })
        .collect();
    let delays = h.into_iter().zip(g).flat_map(|(hk, gk)| [hk, gk]).collect();
    let model = ModelSpec::new("nicholson", terms, delays, linear_mortality(b))?;
    Ok(attach(model, source))
}

/// `x' = a(t) x(t - h) x(t - g) - (b(t) - c(t) / (1 + x^n)) x^2`.
pub fn make_product_delay(
    a: TimeFunction,
    b: TimeFunction,
    c: TimeFunction,
    h: f64,
    g: f64,
    n: f64,
) -> Result<ModelSpec> {
    nonneg("a", &a)?;
    nonneg("b", &b)?;
    nonneg("c", &c)?;
    if !(n > 0.0) {
        return Err(invalid("n", "exponent must be positive"));
    }
    let (bc, cc) = (b.clone(), c.clone());
    let gap = sampled_inf(|t| bc.eval(t) - cc.eval(t));
    if !(gap > 0.0) {
        return Err(invalid("b", format!("need b(t) - c(t) bounded away from zero, got {gap}")));
    }
    let source = (|| {
        Some(ModelConfig::ProductDelay {
            a: CoefficientConfig::from_function(&a)?,
            b: CoefficientConfig::from_function(&b)?,
            c: CoefficientConfig::from_function(&c)?,
            h,
            g,
            n,
        })
    })();
    let ac = a.clone();
    let term = ProductionTerm::new(vec![Increasing, Increasing], move |t, u| ac.eval(t) * u[0] * u[1])
        .with_coefficients(vec![a]);
    let mortality = MortalityTerm::new(move |t, u| (bc.eval(t) - cc.eval(t) / (1.0 + u.powf(n))) * u * u)
        .with_coefficients(vec![b, c]);
    let model = ModelSpec::new("product-delay", vec![term], vec![DelaySpec::lag(h)?, DelaySpec::lag(g)?], mortality)?;
    Ok(attach(model, source))
}

/// `x' = sum_k a_k(t) x(h_k(t)) - b(t) x(t)`.
pub fn make_linear_multi_delay(a: Vec<TimeFunction>, h: Vec<DelaySpec>, b: TimeFunction) -> Result<ModelSpec> {
    check_len("h", h.len(), a.len())?;
    for ak in &a {
        nonneg("a", ak)?;
    }
    nonneg("b", &b)?;
    if !(b.inf() > 0.0) {
        return Err(invalid("b", "mortality rate must be bounded away from zero"));
    }
    let source = (|| {
        Some(ModelConfig::Linear {
            a: coef_configs(&a)?,
            h: delay_configs(&h)?,
            b: CoefficientConfig::from_function(&b)?,
        })
    })();
    let l = a.len();
    let terms = a
        .iter()
        .enumerate()
        .map(|(k, ak)| {
            let mut tags = vec![Independent; l];
            tags[k] = Increasing;
            let mut slopes = vec![TimeFunction::constant(0.0); l];
            slopes[k] = ak.clone();
            let akc = ak.clone();
            ProductionTerm::new(tags, move |t, u| akc.eval(t) * u[k])
                .with_linear_majorant(LinearMajorant { slopes, constant: 0.0 })
                .with_pointwise_majorant(PointwiseMajorant { arg: k, bound: ak.sup() })
                .with_coefficients(vec![ak.clone()])
        })
        .collect();
    let model = ModelSpec::new("linear", terms, h, linear_mortality(b))?;
    Ok(attach(model, source))
}

/// `x' = sum_k a_k(t) |sin x(h_k(t))| / (1 + sum_j x(g_j(t))^{n_j}) - (b(t) + c(t) / (1 + x^n)) x`.
///
/// Slots are the `m` sine arguments followed by the shared denominator arguments.
pub fn make_sine_mg(
    a: Vec<TimeFunction>,
    b: TimeFunction,
    c: TimeFunction,
    exponents: Vec<f64>,
    n: f64,
    sine_delays: Vec<DelaySpec>,
    delays: Vec<DelaySpec>,
) -> Result<ModelSpec> {
    let m = a.len();
    let l = delays.len();
    check_len("sine_delays", sine_delays.len(), m)?;
    check_len("exponents", exponents.len(), l)?;
    for ak in &a {
        nonneg("a", ak)?;
    }
    nonneg("b", &b)?;
    nonneg("c", &c)?;
    if !(n > 0.0) || exponents.iter().any(|&e| !(e >= 0.0)) {
        return Err(invalid("n", "exponents must be positive"));
    }
    let (bc, cc) = (b.clone(), c.clone());
    let beta = sampled_inf(|t| bc.eval(t) + cc.eval(t));
    if !(beta > 0.0) {
        return Err(invalid("b", format!("need b(t) + c(t) >= beta > 0, got {beta}")));
    }
    let source = (|| {
        Some(ModelConfig::SineMg {
            a: coef_configs(&a)?,
            b: CoefficientConfig::from_function(&b)?,
            c: CoefficientConfig::from_function(&c)?,
            exponents: exponents.clone(),
            n,
            sine_delays: delay_configs(&sine_delays)?,
            delays: delay_configs(&delays)?,
        })
    })();
    let arity = m + l;
    let terms = a
        .iter()
        .enumerate()
        .map(|(k, ak)| {
            let mut tags = vec![Independent; arity];
            tags[k] = Monotonicity::None;
            for (j, &e) in exponents.iter().enumerate() {
                if e > 0.0 {
                    tags[m + j] = Decreasing;
                }
            }
            let (akc, ex) = (ak.clone(), exponents.clone());
            ProductionTerm::new(tags, move |t, u| {
                let den: f64 = 1.0 + ex.iter().enumerate().map(|(j, &e)| u[m + j].powf(e)).sum::<f64>();
                akc.eval(t) * u[k].sin().abs() / den
            })
            .with_linear_majorant(LinearMajorant {
                slopes: vec![TimeFunction::constant(0.0); arity],
                constant: ak.sup(),
            })
            .with_coefficients(vec![ak.clone()])
        })
        .collect();
    let all_delays = sine_delays.into_iter().chain(delays).collect();
    let big_b = b.sup() + c.sup();
    let mut g = MortalityTerm::new(move |t, u| (bc.eval(t) + cc.eval(t) / (1.0 + u.powf(n))) * u)
        .with_lower_linear(b.clone())
        .with_coefficients(vec![b.clone(), c]);
    if b.inf() > 0.0 {
        g = g.with_two_sided_linear(b.inf(), big_b);
    }
    let model = ModelSpec::new("sine-mackey-glass", terms, all_delays, g)?;
    Ok(attach(model, source))
}

/// `x' = x(t - tau)^2`.
pub fn make_eq7a(tau: f64) -> Result<ModelSpec> {
    let term = ProductionTerm::new(vec![Increasing], |_, u| u[0] * u[0]);
    ModelSpec::new("eq7a", vec![term], vec![DelaySpec::lag(tau)?], MortalityTerm::zero())
}

fn sine_lag() -> DelaySpec {
    DelaySpec::custom(|t| t - t.sin().abs(), DelayKind::Bounded(1.0))
}

/// `x' = x(t - |sin t|)`.
pub fn make_eq7b() -> Result<ModelSpec> {
    let term = ProductionTerm::new(vec![Increasing], |_, u| u[0])
        .with_linear_majorant(LinearMajorant { slopes: vec![TimeFunction::constant(1.0)], constant: 0.0 });
    ModelSpec::new("eq7b", vec![term], vec![sine_lag()], MortalityTerm::zero())
}

/// `x' = x(t - |sin t|)^2 / (1 + x(t)^2) - x(t)^3`.
pub fn make_eq7c() -> Result<ModelSpec> {
    let term = ProductionTerm::new(vec![Increasing, Decreasing], |_, u| u[0] * u[0] / (1.0 + u[1] * u[1]));
    ModelSpec::new("eq7c", vec![term], vec![sine_lag(), DelaySpec::current()], MortalityTerm::new(|_, u| u * u * u))
}

/// `ln(num / den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LnRational {
    pub num: u64,
    pub den: u64,
}

impl LnRational {
    pub fn value(&self) -> f64 {
        (self.num as f64 / self.den as f64).ln()
    }
}

/// Periodic Mackey-Glass example with an explicit orbit of period `a + b`.
#[derive(Debug, Clone)]
pub struct Example1 {
    pub model: ModelSpec,
    pub history: HistorySpec,
    pub a: f64,
    pub b: f64,
    pub period: f64,
}

impl Example1 {
    pub const A: LnRational = LnRational { num: 59, den: 24 };
    pub const B: LnRational = LnRational { num: 134, den: 15 };

    /// Exact solution for `t >= -(a + b)`.
    pub fn closed_form(&self, t: f64) -> f64 {
        let n = (t / self.period).floor();
        let r = t - n * self.period;
        if r < self.a {
            (64.0 - 59.0 * (-r).exp()) / 10.0
        } else {
            (1.0 + 67.0 * (-(r - self.a)).exp()) / 17.0
        }
    }
}

pub fn make_example1() -> Result<Example1> {
    let (a, b) = (Example1::A.value(), Example1::B.value());
    let period = a + b;
    let kind = DelayKind::Bounded(2.0 * period);
    let h = DelaySpec::lattice(period, vec![0.0, a], vec![-b, -a - b], kind)?;
    let g = DelaySpec::lattice(period, vec![0.0, a], vec![-a - b, -b], kind)?;
    let model = make_mackey_glass(TimeFunction::constant(2.0), 2.0, h, g, TimeFunction::constant(1.0))?
        .with_label("example1")
        .with_source(ModelConfig::Catalog { name: "example1".into(), cycles: None });
    let history = HistorySpec::from_fn(
        move |s| {
            if s < -period {
                0.5
            } else if s < -b {
                (64.0 - 59.0 * (-(s + period)).exp()) / 10.0
            } else {
                (1.0 + 67.0 * (-(s + b)).exp()) / 17.0
            }
        },
        0.5,
        4.0,
        Some(period),
        "periodic orbit segment on [-(a + b), 0]",
    )?;
    Ok(Example1 { model, history, a, b, period })
}

/// Mackey-Glass equation with unbounded delays whose solution oscillates with
/// amplitude `2^k`.
#[derive(Debug, Clone)]
pub struct MgUnbounded {
    pub model: ModelSpec,
    pub history: HistorySpec,
    /// `t_0 = 0, t_1, ..., t_{2K}`.
    pub switch_times: Vec<f64>,
    /// `x(t_i)`.
    pub targets: Vec<f64>,
    /// Equilibrium level the solution relaxes to on `[t_i, t_{i+1})`.
    pub plateaus: Vec<f64>,
}

impl MgUnbounded {
    pub fn horizon(&self) -> f64 {
        *self.switch_times.last().unwrap()
    }
}

fn relax_time(x0: f64, plateau: f64, target: f64) -> Result<f64> {
    let ratio = (x0 - plateau) / (target - plateau);
    if !(ratio > 1.0 && ratio.is_finite()) {
        return Err(Error::Invariant(format!("target {target} not strictly between {x0} and plateau {plateau}")));
    }
    Ok(ratio.ln())
}

pub fn make_mg_unbounded(cycles: usize) -> Result<MgUnbounded> {
    if cycles == 0 {
        return Err(invalid("cycles", "need at least one cycle"));
    }
    let mut times = vec![0.0];
    let mut targets = vec![1.0];
    let mut plateaus = Vec::new();
    let mut x_odd = 0.25;
    for k in 0..cycles as i32 {
        let x_even = 2f64.powi(k);
        let t = *times.last().unwrap();
        let plateau = 2.0 * x_odd / (1.0 + x_even * x_even);
        let down = 2f64.powi(-k - 1);
        let t_odd = t + relax_time(x_even, plateau, down)?;
        plateaus.push(plateau);
        let plateau = 6.0 * x_even / (1.0 + x_odd * x_odd);
        let up = 2f64.powi(k + 1);
        let t_even = t_odd + relax_time(down, plateau, up)?;
        plateaus.push(plateau);
        times.extend([t_odd, t_even]);
        targets.extend([down, up]);
        x_odd = down;
    }
    let prev = |i: usize| if i == 0 { -1.0 } else { times[i - 1] };
    let last = times.len() - 1;
    let h_vals: Vec<f64> = (0..=last).map(prev).collect();
    let g_vals: Vec<f64> = (0..=last).map(|i| if i % 2 == 0 { times[i] } else { prev(i - 1) }).collect();
    let a_vals: Vec<f64> = (0..=last).map(|i| if i % 2 == 0 { 2.0 } else { 6.0 }).collect();
    let a = TimeFunction::steps(times[1..].to_vec(), a_vals)?;
    let h = DelaySpec::steps(times.clone(), h_vals, DelayKind::Unbounded)?;
    let g = DelaySpec::steps(times.clone(), g_vals, DelayKind::Unbounded)?;
    let model = make_mackey_glass(a, 2.0, h, g, TimeFunction::constant(1.0))?
        .with_label("mg-unbounded")
        .with_source(ModelConfig::Catalog { name: "mg-unbounded".into(), cycles: Some(cycles as u32) });
    let history = HistorySpec::piecewise_linear(vec![-1.0, 0.0], vec![0.25, 1.0])?;
    Ok(MgUnbounded { model, history, switch_times: times, targets, plateaus })
}

/// A ready-to-run catalog model.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub model: ModelSpec,
    pub history: HistorySpec,
    /// Default horizon: `100 tau` for bounded constant delays, ten cycles for the switching examples.
    pub horizon: f64,
    pub period: Option<f64>,
    /// Recommended step control; stiff growing models get a lower overflow guard.
    pub control: StepControl,
}

const LABELS: [&str; 13] = [
    "decay",
    "example1",
    "mg-unbounded",
    "mg-permanent",
    "product-unbounded",
    "product-bounded",
    "linear-unbounded",
    "mg5-bounded",
    "nicholson",
    "sine-mg",
    "eq7a",
    "eq7b",
    "eq7c",
];

pub fn catalog_labels() -> &'static [&'static str] {
    &LABELS
}

fn lag(tau: f64) -> DelaySpec {
    DelaySpec::lag(tau).expect("catalog lags are valid")
}

fn cst(c: f64) -> TimeFunction {
    TimeFunction::constant(c)
}

/// Looks up a catalog model; `cycles` only affects the switching examples.
pub fn catalog_entry(label: &str, cycles: Option<u32>) -> Result<CatalogEntry> {
    let flat = |model: ModelSpec, x0: f64, horizon: f64| -> Result<CatalogEntry> {
        let source = ModelConfig::Catalog { name: label.to_string(), cycles: None };
        Ok(CatalogEntry {
            model: model.with_label(label).with_source(source),
            history: HistorySpec::constant(x0)?,
            horizon,
            period: None,
            control: StepControl::default(),
        })
    };
    match label {
        "decay" => flat(make_linear_multi_delay(vec![cst(0.0)], vec![lag(1.0)], cst(1.0))?, 1.0, 100.0),
        "example1" => {
            let ex = make_example1()?;
            let n = cycles.unwrap_or(10) as f64;
            Ok(CatalogEntry {
                horizon: n * ex.period,
                period: Some(ex.period),
                model: ex.model,
                history: ex.history,
                control: StepControl::default(),
            })
        }
        "mg-unbounded" => {
            let mg = make_mg_unbounded(cycles.unwrap_or(8) as usize)?;
            Ok(CatalogEntry {
                horizon: mg.horizon(),
                period: None,
                model: mg.model,
                history: mg.history,
                control: StepControl::default(),
            })
        }
        "mg-permanent" => flat(make_mackey_glass(cst(2.0), 2.0, lag(1.0), lag(0.5), cst(1.0))?, 0.5, 200.0),
        "product-unbounded" => {
            // The quadratic mortality makes the step size scale like 1 / x.
            let mut e = flat(make_product_delay(cst(3.0), cst(2.0), cst(1.0), 1.0, 1.0, 1.0)?, 2.0, 100.0)?;
            e.control.overflow_guard = 1e4;
            Ok(e)
        }
        "product-bounded" => flat(make_product_delay(cst(1.0), cst(2.0), cst(0.5), 1.0, 0.5, 1.0)?, 1.0, 100.0),
        "linear-unbounded" => flat(make_linear_multi_delay(vec![cst(2.0)], vec![lag(1.0)], cst(1.0))?, 1.0, 100.0),
        "mg5-bounded" => flat(
            make_mackey_glass_multi(
                vec![cst(0.25), cst(0.25)],
                vec![2.0, 1.0],
                vec![lag(1.0), lag(0.7)],
                vec![lag(0.5), lag(1.0)],
                cst(1.5),
                cst(0.5),
                1.0,
            )?,
            1.0,
            100.0,
        ),
        "nicholson" => {
            flat(make_nicholson_multi(vec![cst(2.0)], vec![1.0], vec![lag(1.0)], vec![lag(0.5)], cst(1.0))?, 1.0, 100.0)
        }
        "sine-mg" => flat(
            make_sine_mg(vec![cst(1.0)], cst(1.0), cst(0.5), vec![1.0], 1.0, vec![lag(1.0)], vec![lag(0.5)])?,
            1.0,
            100.0,
        ),
        "eq7a" => flat(make_eq7a(1.0)?, 2.0, 10.0),
        "eq7b" => flat(make_eq7b()?, 1.0, 10.0),
        "eq7c" => flat(make_eq7c()?, 1.0, 10.0),
        other => Err(Error::UnknownLabel(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mackey_glass_rejects_bad_parameters() {
        let ok = |a: f64, n: f64| make_mackey_glass(cst(a), n, lag(1.0), lag(1.0), cst(1.0)).is_ok();
        assert!(!ok(-1.0, 2.0));
        assert!(!ok(1.0, 0.0));
        assert!(ok(0.0, 3.0));
    }

    #[test]
    fn zero_production_is_pure_decay() {
        let m = make_mackey_glass(cst(0.0), 4.0, lag(1.0), lag(2.0), cst(1.5)).unwrap();
        assert_eq!(m.rhs(3.0, &[7.0, 2.0], 2.0), -3.0);
    }

    #[test]
    fn product_delay_requires_gap() {
        assert!(make_product_delay(cst(1.0), cst(1.0), cst(1.0), 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn linear_requires_positive_mortality() {
        assert!(make_linear_multi_delay(vec![cst(1.0)], vec![lag(1.0)], cst(0.0)).is_err());
    }

    #[test]
    fn example1_history_values() {
        let ex = make_example1().unwrap();
        assert!((ex.history.eval(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(ex.history.eval(-ex.b), 4.0);
        assert!((ex.history.eval(-ex.period) - 0.5).abs() < 1e-14);
        assert_eq!(ex.model.delays()[0].eval(0.0), -ex.b);
    }

    #[test]
    fn mg_unbounded_targets() {
        let mg = make_mg_unbounded(3).unwrap();
        assert_eq!(mg.targets, vec![1.0, 0.5, 2.0, 0.25, 4.0, 0.125, 8.0]);
        assert!((mg.switch_times[1] - 3f64.ln()).abs() < 1e-15);
        assert!((mg.plateaus[1] - 96.0 / 17.0).abs() < 1e-14);
        assert!(mg.switch_times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn every_label_builds() {
        for label in catalog_labels() {
            let e = catalog_entry(label, None).unwrap();
            assert_eq!(e.model.label(), *label);
        }
        assert!(catalog_entry("nope", None).is_err());
    }
}
