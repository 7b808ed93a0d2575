use serde::{Deserialize, Serialize};

use super::{
    product_points, scan_ratio, ArgClasses, CheckGrid, CriterionId, CriterionReport, Sample, ScanError, Verdict,
    MIXED_SAMPLES,
};
use crate::model::{ModelSpec, TimePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundedVariant {
    /// All arguments equal, production non-decreasing in each.
    A,
    /// Non-decreasing arguments equal, the others at their worst case.
    B,
    /// Non-decreasing arguments equal, the others frozen at a level.
    C,
}

const FROZEN_LEVELS: [f64; 5] = [1e-2, 0.1, 1.0, 10.0, 100.0];

/// Ratio test `limsup sum f / g < 1` as the state grows.
pub fn check_bounded_ratio(model: &ModelSpec, variant: BoundedVariant, grid: &CheckGrid) -> CriterionReport {
    let l = model.arity();
    let c = ArgClasses::of(model);
    let times = grid.times();
    match variant {
        BoundedVariant::A => {
            let id = CriterionId::Bounded4a;
            if !c.decreasing.is_empty() || !c.mixed.is_empty() {
                return CriterionReport::not_applicable(id, grid, "production is not non-decreasing in every argument");
            }
            let pts: Vec<_> = grid.large_u.iter().map(|&u| (vec![u; l], u)).collect();
            ratio_report(id, model, &times, &pts, grid)
        }
        BoundedVariant::B => {
            let id = CriterionId::Bounded4b;
            if c.increasing.is_empty() {
                return CriterionReport::not_applicable(
                    id,
                    grid,
                    "no argument in which the production is non-decreasing",
                );
            }
            let mut pts = Vec::new();
            for &u in &grid.large_u {
                let fixed: Vec<_> = c.increasing.iter().map(|&j| (j, u)).collect();
                for p in product_points(l, &fixed, &c.mixed, &MIXED_SAMPLES) {
                    pts.push((p, u));
                }
            }
            ratio_report(id, model, &times, &pts, grid)
                .note(format!("designated arguments {:?}, decreasing ones at 0", c.increasing))
        }
        BoundedVariant::C => {
            let id = CriterionId::Bounded4c;
            if c.increasing.is_empty() {
                return CriterionReport::not_applicable(
                    id,
                    grid,
                    "no argument in which the production is non-decreasing",
                );
            }
            let others: Vec<usize> = (0..l).filter(|j| !c.increasing.contains(j)).collect();
            let at_level = |m0: f64| -> Vec<CriterionReport> {
                [m0, 10.0 * m0, 100.0 * m0]
                    .iter()
                    .map(|&m| {
                        let pts: Vec<_> = grid
                            .large_u
                            .iter()
                            .map(|&u| {
                                let mut p = vec![m; l];
                                for &j in &c.increasing {
                                    p[j] = u;
                                }
                                (p, u)
                            })
                            .collect();
                        ratio_report(id, model, &times, &pts, grid)
                    })
                    .collect()
            };
            let mut last = Vec::new();
            for &m0 in &FROZEN_LEVELS {
                let rs = at_level(m0);
                if rs.iter().all(|r| r.verdict == Verdict::Holds) {
                    let margin = rs.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
                    let mut r = CriterionReport::new(id, Verdict::Holds, margin, grid).note(format!(
                        "frozen arguments {others:?} at {m0}, {}, {}",
                        10.0 * m0,
                        100.0 * m0
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

fn ratio_report(
    id: CriterionId,
    model: &ModelSpec,
    times: &[f64],
    pts: &[(Vec<f64>, f64)],
    grid: &CheckGrid,
) -> CriterionReport {
    match scan_ratio(model, times, pts, true) {
        Ok(scan) => {
            let verdict = grid.below_one(scan.value);
            CriterionReport::new(id, verdict, 1.0 - scan.value, grid)
                .with(scan.at)
                .note(format!("sampled sup of sum f / g = {:.6}", scan.value))
        }
        Err(ScanError::ZeroMortality(s)) => CriterionReport::new(id, Verdict::Inconclusive, 0.0, grid)
            .with(s)
            .note("mortality vanishes at a positive state"),
    }
}

/// Linear majorants dominated by a linear mortality floor.
pub fn check_bounded_linear(model: &ModelSpec, grid: &CheckGrid) -> CriterionReport {
    let id = CriterionId::Bounded6;
    let Some(a0) = model.mortality().lower_linear() else {
        return CriterionReport::not_applicable(id, grid, "no linear lower bound on the mortality");
    };
    if model.terms().iter().any(|f| f.linear_majorant().is_none()) {
        return CriterionReport::not_applicable(id, grid, "some production term has no linear majorant");
    }
    let mut worst_ratio = Sample { t: 0.0, args: vec![], state: 0.0, value: f64::NEG_INFINITY };
    let mut min_a0 = Sample { t: 0.0, args: vec![], state: 0.0, value: f64::INFINITY };
    for t in grid.times() {
        let at = TimePoint::new(t);
        let a = a0.eval(at);
        let slopes: f64 = model.terms().iter().map(|f| f.linear_majorant().unwrap().slope_sum(at)).sum();
        if a < min_a0.value {
            min_a0 = Sample { t, args: vec![slopes], state: 0.0, value: a };
        }
        let r = if a > 0.0 { slopes / a } else { f64::INFINITY };
        if r > worst_ratio.value {
            worst_ratio = Sample { t, args: vec![slopes], state: a, value: r };
        }
    }
    if !(min_a0.value > 0.0) {
        return CriterionReport::new(id, Verdict::Fails, min_a0.value, grid)
            .with(min_a0)
            .note("mortality floor a0(t) is not positive");
    }
    let verdict = grid.below_one(worst_ratio.value);
    CriterionReport::new(id, verdict, 1.0 - worst_ratio.value, grid)
        .with(worst_ratio)
        .note("value = sum of majorant slopes / a0(t); args hold the slope sum, state a0(t)")
}

/// Constant production bounds with a positive linear mortality floor.
pub fn check_corollary_constant(model: &ModelSpec, grid: &CheckGrid) -> CriterionReport {
    let id = CriterionId::BoundedCor2;
    let Some(a0) = model.mortality().lower_linear() else {
        return CriterionReport::not_applicable(id, grid, "no linear lower bound on the mortality");
    };
    let times = grid.times();
    let (t_min, min_a0) = times.iter().map(|&t| (t, a0.eval(t))).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    if !(min_a0 > 0.0) {
        return CriterionReport::new(id, Verdict::Fails, min_a0, grid)
            .with(Sample { t: t_min, args: vec![], state: 0.0, value: min_a0 })
            .note("mortality floor a0(t) is not positive");
    }
    let all_constant = model.terms().iter().all(|f| f.linear_majorant().is_some_and(|m| m.is_constant_bound()));
    if all_constant {
        let total: f64 = model.terms().iter().map(|f| f.linear_majorant().unwrap().constant).sum();
        return CriterionReport::new(id, Verdict::Holds, min_a0, grid)
            .with(Sample { t: t_min, args: vec![total], state: 0.0, value: min_a0 })
            .note("every production term has a constant bound; value = min a0(t), args hold the bound sum");
    }
    let l = model.arity();
    let c = ArgClasses::of(model);
    let big = *grid.large_u.last().unwrap();
    let small = grid.large_u[0];
    let pick = |u: f64| {
        let fixed: Vec<_> = c.increasing.iter().chain(&c.mixed).map(|&j| (j, u)).collect();
        product_points(l, &fixed, &[], &[]).into_iter().next().unwrap()
    };
    let (p_small, p_big) = (pick(small), pick(big));
    let worst = times
        .iter()
        .map(|&t| (t, model.production(t, &p_big), model.production(t, &p_small)))
        .max_by(|a, b| (a.1 - a.2).total_cmp(&(b.1 - b.2)))
        .unwrap();
    if worst.1 >= 10.0 * worst.2.max(f64::MIN_POSITIVE) && worst.1 > 1.0 {
        CriterionReport::new(id, Verdict::Fails, -worst.1, grid)
            .with(Sample { t: worst.0, args: p_big, state: big, value: worst.1 })
            .note("production grows without bound along the non-decreasing arguments")
    } else {
        CriterionReport::new(id, Verdict::Inconclusive, 0.0, grid).note("no constant production bound declared")
    }
}
