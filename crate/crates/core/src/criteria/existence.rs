use serde::{Deserialize, Serialize};

use super::{product_points, ArgClasses, CheckGrid, CriterionId, CriterionReport, Sample, Verdict};
use crate::model::{DelaySpec, ModelSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub a4_1: CriterionReport,
    pub a4_2: CriterionReport,
    pub a4_3: CriterionReport,
}

impl ExistenceReport {
    /// Whether any of the three alternatives holds.
    pub fn any_holds(&self) -> bool {
        [&self.a4_1, &self.a4_2, &self.a4_3].iter().any(|r| r.verdict == Verdict::Holds)
    }
}

pub fn check_existence(model: &ModelSpec, grid: &CheckGrid) -> ExistenceReport {
    ExistenceReport {
        a4_1: check_min_lag(model, grid),
        a4_2: check_linear_growth(model, grid),
        a4_3: check_dominant_mortality(model, grid),
    }
}

const MIN_LAG: f64 = 1e-8;

fn lag(d: &DelaySpec, t: f64) -> f64 {
    t - d.eval(t)
}

/// Smallest sampled `t - h(t)` refined by golden-section search.
fn min_lag(d: &DelaySpec, t_max: f64, n: usize) -> (f64, f64) {
    let dt = t_max / n as f64;
    let (mut best_t, mut best) = (0.0, lag(d, 0.0));
    for i in 1..=n {
        let t = dt * i as f64;
        let l = lag(d, t);
        if l < best {
            best = l;
            best_t = t;
        }
    }
    let (mut a, mut b) = ((best_t - dt).max(0.0), (best_t + dt).min(t_max));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - r * (b - a);
        let e = a + r * (b - a);
        if lag(d, c) < lag(d, e) {
            b = e;
        } else {
            a = c;
        }
    }
    for t in [a, b, 0.5 * (a + b)] {
        let l = lag(d, t);
        if l < best {
            best = l;
            best_t = t;
        }
    }
    (best_t, best)
}

fn check_min_lag(model: &ModelSpec, grid: &CheckGrid) -> CriterionReport {
    let id = CriterionId::ExistenceA41;
    let mut worst: Option<(usize, f64, f64)> = None;
    for (j, d) in model.delays().iter().enumerate() {
        let (t, l) = if d.is_current() { (0.0, 0.0) } else { min_lag(d, grid.t_max, grid.lag_points) };
        if worst.is_none_or(|w| l < w.2) {
            worst = Some((j, t, l));
        }
    }
    let Some((j, t, l)) = worst else {
        return CriterionReport::new(id, Verdict::Holds, f64::MAX, grid).note("no delayed arguments");
    };
    let sample = Sample { t, args: vec![j as f64, model.delays()[j].eval(t)], state: 0.0, value: l };
    let verdict = if l >= MIN_LAG { Verdict::Holds } else { Verdict::Fails };
    CriterionReport::new(id, verdict, l, grid)
        .with(sample)
        .note(format!("minimum sampled lag t - h_{j}(t) = {l:e}; args hold (delay index, h(t))"))
}

fn check_linear_growth(model: &ModelSpec, grid: &CheckGrid) -> CriterionReport {
    let id = CriterionId::ExistenceA42;
    let l = model.arity();
    if model.terms().iter().all(|f| f.linear_majorant().is_some()) {
        let us: Vec<f64> = grid.small_u.iter().chain([1.0].iter()).chain(&grid.large_u).copied().collect();
        let mut margin = f64::INFINITY;
        for t in grid.times().into_iter().step_by(10) {
            for &u in &us {
                let patterns = [
                    vec![u; l],
                    (0..l).map(|j| if j % 2 == 0 { u } else { 0.0 }).collect::<Vec<_>>(),
                    (0..l).map(|j| if j % 2 == 0 { 0.0 } else { u }).collect(),
                ];
                for args in &patterns {
                    for f in model.terms() {
                        let bound = f.linear_majorant().unwrap().eval(t.into(), args);
                        let v = f.eval(t, args);
                        let slack = (1.0 + bound - v) / (1.0 + bound);
                        if v > bound + 1e-9 * (1.0 + bound) {
                            return CriterionReport::new(id, Verdict::Fails, slack - 1.0, grid)
                                .with(Sample { t, args: args.clone(), state: 0.0, value: v - bound })
                                .note("declared linear majorant violated");
                        }
                        margin = margin.min(slack);
                    }
                }
            }
        }
        return CriterionReport::new(id, Verdict::Holds, margin, grid).note("declared linear majorants verified");
    }
    let classes = ArgClasses::of(model);
    let growth = |big: f64| -> (f64, Sample) {
        let fixed: Vec<(usize, f64)> = classes.increasing.iter().map(|&j| (j, big)).collect();
        let pts = product_points(l, &fixed, &classes.mixed, &[0.0, big]);
        let mut best = (f64::NEG_INFINITY, None);
        for t in grid.times().into_iter().step_by(4) {
            for p in &pts {
                let q = model.production(t, p) / (1.0 + big);
                if q > best.0 {
                    best = (q, Some(Sample { t, args: p.clone(), state: big, value: q }));
                }
            }
        }
        (best.0, best.1.unwrap())
    };
    let (lo, _) = growth(10.0);
    let (hi, mut s) = growth(1e4);
    if hi > 0.0 && hi >= 10.0 * lo {
        s.value = hi / lo.max(f64::MIN_POSITIVE);
        CriterionReport::new(id, Verdict::Fails, 1.0 - s.value, grid)
            .with(s)
            .note("superlinear growth: f / (1 + U) grows at least tenfold from U = 10 to U = 1e4")
    } else {
        CriterionReport::new(id, Verdict::Inconclusive, 0.0, grid)
            .note("no linear majorant declared and no superlinear growth detected")
    }
}

fn check_dominant_mortality(model: &ModelSpec, grid: &CheckGrid) -> CriterionReport {
    let id = CriterionId::ExistenceA43;
    let classes = ArgClasses::of(model);
    let l = model.arity();
    let mut per_x = Vec::new();
    for &x in &grid.existence_x {
        let fixed: Vec<(usize, f64)> = classes.increasing.iter().map(|&j| (j, x)).collect();
        let values: Vec<f64> = (0..=8).map(|i| x * i as f64 / 8.0).collect();
        let pts = product_points(l, &fixed, &classes.mixed, &values);
        let mut worst: Option<Sample> = None;
        for t in grid.times() {
            let g = model.mortality().eval(t, x);
            for p in &pts {
                let v = g - model.production(t, p);
                if worst.as_ref().is_none_or(|w| v < w.value) {
                    worst = Some(Sample { t, args: p.clone(), state: x, value: v });
                }
            }
        }
        per_x.push(worst.unwrap());
    }
    let min = per_x.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
    let last = per_x.last().unwrap().clone();
    let verdict = if min > 0.0 {
        Verdict::Holds
    } else if last.value < 0.0 {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    let mut r = CriterionReport::new(id, verdict, min, grid)
        .note("value = g(t, x) - sum f(t, u) at the worst admissible u <= x");
    if verdict == Verdict::Fails {
        r = r.with(last);
    } else {
        r.evidence = per_x;
    }
    r
}
