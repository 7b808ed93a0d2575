mod common;

use mixdelay::analysis::{classify, growth_probe, period_residual, tail_extrema, ClassifyOptions, GrowthFlag};
use mixdelay::criteria::{check_permanent, check_unbounded, CheckGrid, Verdict};
use mixdelay::integrator::{integrate, StepControl};
use mixdelay::model::{catalog_entry, catalog_labels, make_example1, make_mg_unbounded, HistorySpec};

#[test]
fn permanent_models_stay_inside_their_envelope() {
    let grid = CheckGrid::default();
    let mut rng = common::rng(21);
    let mut checked = 0;
    for label in catalog_labels() {
        let e = catalog_entry(label, None).unwrap();
        let Some(tau) = e.model.max_lag() else { continue };
        let (rep, env) = check_permanent(&e.model, &grid);
        if rep.verdict != Verdict::Holds {
            continue;
        }
        let env = env.unwrap();
        let opts = ClassifyOptions { tail_fraction: 0.25, ..Default::default() };
        for i in 0..20 {
            let phi = common::random_history(&mut rng, tau, 6, env.lower / 2.0, 2.0 * env.upper);
            let tr = integrate(&e.model, &phi, 100.0 * tau, &e.control).unwrap();
            let c = classify(&tr, Some(&env), &opts).unwrap();
            assert!(
                c.envelope.unwrap().inside,
                "{label} history {i}: tail [{}, {}] outside [{}, {}]",
                c.tail_inf,
                c.tail_sup,
                env.lower,
                env.upper
            );
        }
        checked += 1;
    }
    assert!(checked >= 1);
}

#[test]
fn unbounded_verdicts_grow_from_k0() {
    let grid = CheckGrid::default();
    let mut checked = 0;
    for label in catalog_labels() {
        let e = catalog_entry(label, None).unwrap();
        let rep = check_unbounded(&e.model, &grid);
        if rep.verdict != Verdict::Holds {
            continue;
        }
        let k0 = rep.evidence[0].state;
        let phi = HistorySpec::constant(k0).unwrap();
        let tr = integrate(&e.model, &phi, 100.0, &e.control).unwrap();
        let probe = growth_probe(&tr, &[10.0, 1e2, 1e3]);
        assert_eq!(probe.flag, GrowthFlag::Growing, "{label} from K0 = {k0}");
        checked += 1;
    }
    assert!(checked >= 2);
}

#[test]
fn unbounded_oscillation_is_neither_bounded_nor_persistent() {
    let k_max = 8;
    let mg = make_mg_unbounded(k_max).unwrap();
    let tr = integrate(&mg.model, &mg.history, mg.horizon(), &StepControl::default()).unwrap();
    let pts: Vec<(f64, f64)> = tr.sample(0.0, tr.t_final(), 20_000).into_iter().chain(tr.mesh()).collect();
    let min = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    // Lows 2^-(k+1) for k < k_max, highs 2^k for k <= k_max.
    for k in 0..k_max as i32 {
        assert!(min < 2f64.powi(-k), "never below 2^-{k}");
    }
    for k in 0..=k_max as i32 {
        assert!(max >= 2f64.powi(k) * (1.0 - 1e-6), "never reaches 2^{k}");
    }
    // The peaks equal the thresholds exactly, so probe just below them.
    let levels: Vec<f64> = [2.0, 4.0, 8.0, 16.0].iter().map(|l| l * (1.0 - 1e-7)).collect();
    let probe = growth_probe(&tr, &levels);
    assert_eq!(probe.flag, GrowthFlag::Growing);
    for (j, c) in probe.crossings.iter().enumerate() {
        let want = mg.switch_times[2 * (j + 1)];
        assert!((c.unwrap() - want).abs() < 1e-6, "crossing of 2^{} at {:?}, switch at {want}", j + 1, c);
    }
}

#[test]
fn period_residual_is_shift_invariant() {
    let ex = make_example1().unwrap();
    let control = StepControl::default();
    let long = integrate(&ex.model, &ex.history, 10.0 * ex.period, &control).unwrap();
    let short = integrate(&ex.model, &ex.history, 9.0 * ex.period, &control).unwrap();
    let r_long = period_residual(&long, ex.period, ex.period).unwrap();
    let r_short = period_residual(&short, ex.period, ex.period).unwrap();
    assert!(r_long <= 1e-6 && r_short <= 1e-6);
    assert!((r_long - r_short).abs() <= 2e-8, "{r_long} vs {r_short}");
    let half = period_residual(&long, ex.period / 2.0, ex.period).unwrap();
    assert!(half >= 1.0, "half-period residual {half}");
    assert!(period_residual(&long, ex.period, 10.0 * ex.period).is_err());
}

#[test]
fn periodic_orbit_tail_extrema() {
    let ex = make_example1().unwrap();
    let tr = integrate(&ex.model, &ex.history, 20.0 * ex.period, &StepControl::default()).unwrap();
    let (lo, hi) = tail_extrema(&tr, 0.5).unwrap();
    assert!((lo - 0.5).abs() <= 1e-4 && (hi - 4.0).abs() <= 1e-4, "[{lo}, {hi}]");
}

#[test]
fn decay_is_not_persistent() {
    let e = catalog_entry("decay", None).unwrap();
    let tr = integrate(&e.model, &e.history, 50.0, &StepControl::default()).unwrap();
    let c = classify(&tr, None, &ClassifyOptions::default()).unwrap();
    assert!(c.tail_inf < 1e-10);
    assert!(c.tail_inf <= c.tail_sup);
    assert_eq!(c.growth.flag, GrowthFlag::BoundedEvidence);
    assert!(c.growth.crossings.iter().all(Option::is_none));
}

#[test]
fn classification_serializes() {
    let e = catalog_entry("mg-permanent", None).unwrap();
    let tr = integrate(&e.model, &e.history, 50.0, &StepControl::default()).unwrap();
    let c = classify(&tr, None, &ClassifyOptions::default()).unwrap();
    let json = serde_json::to_value(&c).unwrap();
    assert_eq!(json["growth"]["flag"], "bounded-evidence");
    assert!(json["tail_inf"].as_f64().unwrap() > 0.9);
}
