use serde::{Deserialize, Serialize};

use super::{
    logspace, scan_ratio, ArgClasses, CheckGrid, CriterionId, CriterionReport, Envelope, Sample, ScanError, Verdict,
};
use crate::model::ModelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PersistenceVariant {
    /// All arguments equal and small.
    A,
    /// Non-decreasing arguments small, non-increasing ones frozen below a level.
    B,
}

const PERSISTENCE_LEVELS: [f64; 5] = [1.0, 0.1, 1e-2, 1e-3, 1e-4];

/// Ratio test `liminf sum f / g > 1` as the state tends to zero.
pub fn check_persistent(model: &ModelSpec, variant: PersistenceVariant, grid: &CheckGrid) -> CriterionReport {
    let l = model.arity();
    let c = ArgClasses::of(model);
    let times = grid.times();
    match variant {
        PersistenceVariant::A => {
            let id = CriterionId::Persistent7a;
            if !c.decreasing.is_empty() || !c.mixed.is_empty() {
                return CriterionReport::not_applicable(id, grid, "production is not non-decreasing in every argument");
            }
            let pts: Vec<_> = grid.small_u.iter().map(|&u| (vec![u; l], u)).collect();
            min_ratio_report(id, model, &times, &pts, grid)
        }
        PersistenceVariant::B => {
            let id = CriterionId::Persistent7b;
            if c.increasing.is_empty() || !c.mixed.is_empty() {
                return CriterionReport::not_applicable(
                    id,
                    grid,
                    "need non-decreasing arguments and every other argument non-increasing",
                );
            }
            let at_level = |m0: f64| -> Vec<CriterionReport> {
                [m0, m0 / 10.0, m0 / 100.0]
                    .iter()
                    .map(|&m| {
                        let pts: Vec<_> = grid
                            .small_u
                            .iter()
                            .map(|&u| {
                                let mut p = vec![m; l];
                                for &j in &c.increasing {
                                    p[j] = u;
                                }
                                (p, u)
                            })
                            .collect();
                        min_ratio_report(id, model, &times, &pts, grid)
                    })
                    .collect()
            };
            let mut last = Vec::new();
            for &m0 in &PERSISTENCE_LEVELS {
                let rs = at_level(m0);
                if rs.iter().all(|r| r.verdict == Verdict::Holds) {
                    let margin = rs.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
                    let mut r = CriterionReport::new(id, Verdict::Holds, margin, grid).note(format!(
                        "non-increasing arguments frozen at {m0}, {}, {}",
                        m0 / 10.0,
                        m0 / 100.0
                    ));
                    r.evidence = rs.into_iter().flat_map(|r| r.evidence).collect();
                    return r;
                }
                last = rs;
            }
            if last.iter().all(|r| r.verdict == Verdict::Fails) {
                let worst = last.into_iter().min_by(|a, b| a.margin.total_cmp(&b.margin)).unwrap();
                worst.note("fails for every frozen level tried")
            } else {
                CriterionReport::new(id, Verdict::Inconclusive, 0.0, grid)
                    .note("frozen levels disagree or ratio within delta of 1")
            }
        }
    }
}

fn min_ratio_report(
    id: CriterionId,
    model: &ModelSpec,
    times: &[f64],
    pts: &[(Vec<f64>, f64)],
    grid: &CheckGrid,
) -> CriterionReport {
    match scan_ratio(model, times, pts, false) {
        Ok(scan) => CriterionReport::new(id, grid.above_one(scan.value), scan.value - 1.0, grid)
            .with(scan.at)
            .note(format!("sampled inf of sum f / g = {:.6}", scan.value)),
        Err(ScanError::ZeroMortality(s)) => CriterionReport::new(id, Verdict::Inconclusive, 0.0, grid)
            .with(s)
            .note("mortality vanishes at a positive state"),
    }
}

/// Structural constants for the permanence bounds.
struct Permanence {
    a: f64,
    b: f64,
    tau: f64,
    increasing: Vec<usize>,
}

fn permanence_params(model: &ModelSpec) -> Result<Permanence, String> {
    let tau = model.max_lag().ok_or("some delay is unbounded")?;
    let (_, b) = model.mortality().two_sided_linear().ok_or("mortality has no two-sided linear bound")?;
    let c = ArgClasses::of(model);
    if !c.mixed.is_empty() || c.increasing.is_empty() {
        return Err("need non-decreasing arguments and every other argument non-increasing".into());
    }
    let mut a = 0.0;
    for f in model.terms() {
        let pm = f.pointwise_majorant().ok_or("some production term has no pointwise majorant")?;
        if !c.increasing.contains(&pm.arg) {
            return Err("pointwise majorant refers to a non-increasing argument".into());
        }
        a += pm.bound;
    }
    Ok(Permanence { a, b, tau, increasing: c.increasing })
}

fn level_points(p: &Permanence, l: usize, m: f64, us: &[f64]) -> Vec<(Vec<f64>, f64)> {
    us.iter()
        .map(|&u| {
            let mut args = vec![m; l];
            for &j in &p.increasing {
                args[j] = u;
            }
            (args, u)
        })
        .collect()
}

enum Level {
    Ok(f64, Sample),
    Bad(f64, Sample),
    ZeroMortality(Sample),
}

fn upper_level(model: &ModelSpec, p: &Permanence, m: f64, grid: &CheckGrid, times: &[f64]) -> Level {
    let us = logspace(m, m * grid.level_span, grid.level_points);
    match scan_ratio(model, times, &level_points(p, model.arity(), m, &us), true) {
        Ok(s) if s.value <= 1.0 - grid.delta => Level::Ok(s.value, s.at),
        Ok(s) => Level::Bad(s.value, s.at),
        Err(ScanError::ZeroMortality(s)) => Level::ZeroMortality(s),
    }
}

fn lower_level(model: &ModelSpec, p: &Permanence, mu: f64, grid: &CheckGrid, times: &[f64]) -> Level {
    let us = logspace(mu / grid.level_span, mu, grid.level_points);
    match scan_ratio(model, times, &level_points(p, model.arity(), mu, &us), false) {
        Ok(s) if s.value >= 1.0 + grid.delta => Level::Ok(s.value, s.at),
        Ok(s) => Level::Bad(s.value, s.at),
        Err(ScanError::ZeroMortality(s)) => Level::ZeroMortality(s),
    }
}

fn finish(
    p: &Permanence,
    upper: (Level, f64),
    lower: (Level, f64),
    grid: &CheckGrid,
) -> (CriterionReport, Option<Envelope>) {
    let id = CriterionId::Permanent8a;
    match (upper, lower) {
        ((Level::Ok(ru, su), m), (Level::Ok(rl, sl), mu)) => {
            let margin = (1.0 - ru).min(rl - 1.0);
            match Envelope::new(m, mu, p.a, p.b, p.tau) {
                Ok(env) => {
                    let r = CriterionReport::new(id, Verdict::Holds, margin, grid).with(su).with(sl).note(format!(
                        "M = {m:.6}, mu = {mu:.6}, A = {}, B = {}, tau = {}; envelope [{:.6e}, {:.6e}]",
                        p.a, p.b, p.tau, env.lower, env.upper
                    ));
                    (r, Some(env))
                }
                Err(e) => (CriterionReport::new(id, Verdict::Inconclusive, 0.0, grid).note(e.to_string()), None),
            }
        }
        ((up, _), (low, _)) => {
            let mut r = CriterionReport::new(id, Verdict::Inconclusive, 0.0, grid);
            let mut failed = false;
            for (lv, part) in [(up, "upper"), (low, "lower")] {
                match lv {
                    Level::Ok(_, s) => r.evidence.push(s),
                    Level::Bad(v, s) => {
                        let refuted = if part == "upper" { v >= 1.0 + grid.delta } else { v <= 1.0 - grid.delta };
                        r.notes.push(format!("{part} level not established (ratio {v:.6})"));
                        if refuted && !failed {
                            failed = true;
                            r.margin = if part == "upper" { 1.0 - v } else { v - 1.0 };
                            r.evidence.insert(0, s);
                        } else {
                            r.evidence.push(s);
                        }
                    }
                    Level::ZeroMortality(s) => {
                        r.notes.push(format!("{part}: mortality vanishes at a positive state"));
                        r.evidence.push(s);
                    }
                }
            }
            if failed {
                r.verdict = Verdict::Fails;
            }
            (r, None)
        }
    }
}

/// Searches the level grid for the smallest upper level `M` and the largest lower level `mu`.
pub fn check_permanent(model: &ModelSpec, grid: &CheckGrid) -> (CriterionReport, Option<Envelope>) {
    let p = match permanence_params(model) {
        Ok(p) => p,
        Err(why) => return (CriterionReport::not_applicable(CriterionId::Permanent8a, grid, why), None),
    };
    let times = grid.times();
    let mut levels = grid.levels.clone();
    levels.sort_by(f64::total_cmp);
    let mut upper = None;
    for &m in &levels {
        let lv = upper_level(model, &p, m, grid, &times);
        let stop = !matches!(lv, Level::Bad(..));
        upper = Some((lv, m));
        if stop {
            break;
        }
    }
    let mut lower = None;
    for &mu in levels.iter().rev() {
        let lv = lower_level(model, &p, mu, grid, &times);
        let stop = !matches!(lv, Level::Bad(..));
        lower = Some((lv, mu));
        if stop {
            break;
        }
    }
    finish(&p, upper.unwrap(), lower.unwrap(), grid)
}

/// Verifies the permanence hypotheses at given levels `m` (upper) and `mu` (lower).
pub fn check_permanent_at(model: &ModelSpec, m: f64, mu: f64, grid: &CheckGrid) -> (CriterionReport, Option<Envelope>) {
    let p = match permanence_params(model) {
        Ok(p) => p,
        Err(why) => return (CriterionReport::not_applicable(CriterionId::Permanent8a, grid, why), None),
    };
    let times = grid.times();
    let upper = (upper_level(model, &p, m, grid, &times), m);
    let lower = (lower_level(model, &p, mu, grid, &times), mu);
    finish(&p, upper, lower, grid)
}

/// Explicit levels for `a(t) x(h) / (1 + x(p)^n) - b(t) x` from the extreme values of `a / b`.
///
/// Returns the upper level and, when `liminf a / b > 1`, the lower level.
pub fn mackey_glass_levels(ratio_sup: f64, ratio_inf: f64, n: f64) -> (f64, Option<f64>) {
    let m0 = if ratio_sup <= 1.0 { 1.0 } else { (ratio_sup - 1.0).powf(1.0 / n) };
    let mu0 = (ratio_inf > 1.0).then(|| (ratio_inf - 1.0).powf(1.0 / n));
    (m0, mu0)
}
