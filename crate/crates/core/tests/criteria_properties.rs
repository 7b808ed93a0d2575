use mixdelay::criteria::{check_all, CheckGrid, CriterionId, CriterionReport, Envelope, ModelReport, Verdict};
use mixdelay::model::{catalog_entry, catalog_labels, make_eq7a, make_eq7b, make_eq7c, ModelSpec};
use proptest::prelude::*;

fn catalog_models() -> Vec<ModelSpec> {
    let mut v: Vec<ModelSpec> = catalog_labels().iter().map(|l| catalog_entry(l, Some(3)).unwrap().model).collect();
    v.push(make_eq7a(0.5).unwrap());
    v.push(make_eq7b().unwrap());
    v.push(make_eq7c().unwrap());
    v
}

fn reports(grid: &CheckGrid) -> Vec<(ModelSpec, ModelReport)> {
    catalog_models()
        .into_iter()
        .map(|m| {
            let r = check_all(&m, grid);
            (m, r)
        })
        .collect()
}

proptest! {
    #[test]
    fn envelope_algebra(
        m in 1e-3f64..1e3,
        mu in 1e-3f64..1e3,
        a in 0.0f64..5.0,
        b in 1e-3f64..5.0,
        tau in 0.0f64..3.0,
    ) {
        let e = Envelope::new(m, mu, a, b, tau).unwrap();
        let upper = m * (2.0 * (a + b) * tau).exp();
        let lower = mu / (2.0 * b * tau).exp();
        prop_assert!((e.upper - upper).abs() <= 4.0 * f64::EPSILON * upper);
        prop_assert!((e.lower - lower).abs() <= 4.0 * f64::EPSILON * lower);
        prop_assert!(e.contains(e.lower, e.upper, 0.0));
    }
}

#[test]
fn bounded_and_unbounded_never_both_hold() {
    for (m, r) in reports(&CheckGrid::default()) {
        let both = r.verdict(CriterionId::Bounded4a) == Some(Verdict::Holds)
            && r.verdict(CriterionId::Unbounded9) == Some(Verdict::Holds);
        assert!(!both, "{} receives both bounded-4a and unbounded-9", m.label());
    }
}

#[test]
fn refinement_never_turns_holds_into_fails() {
    let grid = CheckGrid::default();
    let fine = grid.refined();
    for m in catalog_models() {
        let coarse = check_all(&m, &grid);
        let dense = check_all(&m, &fine);
        for (a, b) in coarse.reports.iter().zip(&dense.reports) {
            assert!(
                !(a.verdict == Verdict::Holds && b.verdict == Verdict::Fails),
                "{} {}: holds on the default grid, fails when refined",
                m.label(),
                a.criterion.name()
            );
        }
    }
}

/// Re-evaluates the failing witness directly from the model.
fn witness_violates(model: &ModelSpec, r: &CriterionReport, delta: f64) -> bool {
    let w = r.witness().expect("fails verdict without a witness");
    let t = w.t;
    let ratio = || model.production(t, &w.args) / model.mortality().eval(t, w.state);
    match r.criterion {
        CriterionId::ExistenceA41 => {
            let j = w.args[0] as usize;
            t - model.delays()[j].eval(t) < 1e-8
        }
        CriterionId::ExistenceA42 => {
            if model.terms().iter().all(|f| f.linear_majorant().is_some()) {
                model.terms().iter().any(|f| f.eval(t, &w.args) > f.linear_majorant().unwrap().eval(t.into(), &w.args))
            } else {
                model.production(t, &w.args) > 0.0 && w.value >= 10.0
            }
        }
        CriterionId::ExistenceA43 => model.mortality().eval(t, w.state) - model.production(t, &w.args) < 0.0,
        CriterionId::Bounded4a | CriterionId::Bounded4b | CriterionId::Bounded4c => ratio() >= 1.0 + delta / 2.0,
        CriterionId::Persistent7a | CriterionId::Persistent7b => ratio() <= 1.0 - delta / 2.0,
        CriterionId::Permanent8a => {
            let q = ratio();
            q >= 1.0 + delta / 2.0 || q <= 1.0 - delta / 2.0
        }
        CriterionId::Bounded6 => {
            let a0 = model.mortality().lower_linear().unwrap().eval(t);
            let slopes: f64 = model.terms().iter().map(|f| f.linear_majorant().unwrap().slope_sum(t.into())).sum();
            a0 <= 0.0 || slopes / a0 >= 1.0 + delta / 2.0
        }
        CriterionId::BoundedCor2 => {
            let a0 = model.mortality().lower_linear().unwrap().eval(t);
            a0 <= 0.0 || model.production(t, &w.args) > 1.0
        }
        CriterionId::Unbounded9 => model.production(t, &w.args) - model.mortality().eval(t, w.state) < 0.0,
    }
}

#[test]
fn every_failure_carries_a_checkable_witness() {
    let grid = CheckGrid::default();
    let mut failures = 0;
    for (m, r) in reports(&grid) {
        for c in r.reports.iter().filter(|c| c.verdict == Verdict::Fails) {
            failures += 1;
            assert!(
                witness_violates(&m, c, grid.delta),
                "{} {}: witness {:?}",
                m.label(),
                c.criterion.name(),
                c.witness()
            );
        }
    }
    assert!(failures > 10, "only {failures} failures across the catalog");
}

#[test]
fn reports_serialize_with_criterion_names() {
    let m = catalog_entry("mg-permanent", None).unwrap().model;
    let r = check_all(&m, &CheckGrid::default());
    let json = serde_json::to_value(&r).unwrap();
    let ids: Vec<&str> = json["reports"].as_array().unwrap().iter().map(|x| x["criterion"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 12);
    assert!(ids.contains(&"permanent-8a"));
    assert!(json["reports"][0]["grid"].as_str().unwrap().contains("delta"));
    let back: ModelReport = serde_json::from_value(json).unwrap();
    assert_eq!(back, r);
}
