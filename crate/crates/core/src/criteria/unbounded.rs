use super::{ArgClasses, CheckGrid, CriterionId, CriterionReport, Sample, Verdict};
use crate::model::ModelSpec;

/// `inf_t [sum f(t, K, ..., K) - g(t, K)] > 0` for all large `K`.
pub fn check_unbounded(model: &ModelSpec, grid: &CheckGrid) -> CriterionReport {
    let id = CriterionId::Unbounded9;
    let c = ArgClasses::of(model);
    if !c.decreasing.is_empty() || !c.mixed.is_empty() {
        return CriterionReport::not_applicable(id, grid, "production is not non-decreasing in every argument");
    }
    let times = grid.times();
    let l = model.arity();
    // Per K: the worst time and the mortality scale used for the delta band.
    let rows: Vec<(Sample, f64)> = grid
        .k_grid
        .iter()
        .map(|&k| {
            let args = vec![k; l];
            let mut worst = Sample { t: 0.0, args: args.clone(), state: k, value: f64::INFINITY };
            let mut scale = 0.0f64;
            for &t in &times {
                let g = model.mortality().eval(t, k);
                scale = scale.max(g).max(k);
                let v = model.production(t, &args) - g;
                if v < worst.value {
                    worst = Sample { t, args: args.clone(), state: k, value: v };
                }
            }
            (worst, scale)
        })
        .collect();
    let positive = |(s, scale): &(Sample, f64)| s.value >= grid.delta * scale;
    let start = (0..rows.len()).find(|&i| rows[i..].iter().all(positive));
    match start {
        Some(i) => {
            let margin = rows[i..].iter().map(|(s, _)| s.value).fold(f64::INFINITY, f64::min);
            let mut r = CriterionReport::new(id, Verdict::Holds, margin, grid)
                .note(format!("K0 = {}; evidence lists a_K = inf_t [sum f - g] per K >= K0", grid.k_grid[i]));
            r.evidence = rows[i..].iter().map(|(s, _)| s.clone()).collect();
            r
        }
        None => {
            let (last, scale) = rows.last().unwrap().clone();
            if last.value <= -grid.delta * scale {
                CriterionReport::new(id, Verdict::Fails, last.value, grid)
                    .with(last)
                    .note("production falls short of mortality at the largest K")
            } else {
                let min = rows.iter().map(|(s, _)| s.value).fold(f64::INFINITY, f64::min);
                CriterionReport::new(id, Verdict::Inconclusive, min, grid)
                    .note("a_K not bounded away from zero on the grid")
            }
        }
    }
}
