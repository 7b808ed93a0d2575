mod common;

use mixdelay::integrator::{integrate, StepControl};
use mixdelay::model::{
    catalog_entry, make_eq7a, make_linear_multi_delay, make_mackey_glass_multi, DelaySpec, HistorySpec, TimeFunction,
};
use proptest::prelude::*;

const POSITIVE_MODELS: [&str; 8] = [
    "decay",
    "mg-permanent",
    "product-bounded",
    "product-unbounded",
    "linear-unbounded",
    "mg5-bounded",
    "nicholson",
    "sine-mg",
];

#[test]
fn solutions_stay_positive() {
    let control = StepControl::default();
    let mut rng = common::rng(11);
    for label in POSITIVE_MODELS {
        let e = catalog_entry(label, None).unwrap();
        let depth = e.model.max_lag().unwrap();
        for i in 0..20 {
            let phi = common::random_history(&mut rng, depth, 6, 1e-3, 10.0);
            let tr = integrate(&e.model, &phi, 30.0, &e.control).unwrap();
            let min = tr
                .sample(0.0, tr.t_final(), 3000)
                .into_iter()
                .chain(tr.mesh())
                .map(|p| p.1)
                .fold(f64::INFINITY, f64::min);
            assert!(min >= -10.0 * control.abs_tol, "{label} history {i}: minimum {min:e}");
            assert!(tr.positivity_floor() >= -10.0 * control.abs_tol, "{label} history {i}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn solution_stays_below_linear_majorant(
        a0 in 0.05f64..1.0,
        a1 in 0.05f64..1.0,
        h0 in 0.2f64..1.5,
        h1 in 0.2f64..1.5,
        b in 0.5f64..2.0,
        c_frac in 0.0f64..0.9,
        seed in 0u64..1000,
    ) {
        let c = b * c_frac;
        let lag = |t: f64| DelaySpec::lag(t).unwrap();
        let x_model = make_mackey_glass_multi(
            vec![TimeFunction::constant(a0), TimeFunction::constant(a1)],
            vec![2.0, 1.0],
            vec![lag(h0), lag(h1)],
            vec![lag(0.5), lag(1.0)],
            TimeFunction::constant(b),
            TimeFunction::constant(c),
            1.0,
        )
        .unwrap();
        let y_model = make_linear_multi_delay(
            vec![TimeFunction::constant(a0), TimeFunction::constant(a1)],
            vec![lag(h0), lag(h1)],
            TimeFunction::constant(b - c),
        )
        .unwrap();
        let phi = common::random_history(&mut common::rng(seed), 1.5, 5, 0.1, 3.0);
        let control = StepControl::default();
        let x = integrate(&x_model, &phi, 20.0, &control).unwrap();
        let y = integrate(&y_model, &phi, 20.0, &control).unwrap();
        let mut mesh: Vec<f64> = x.mesh().into_iter().chain(y.mesh()).map(|p| p.0).collect();
        mesh.sort_by(f64::total_cmp);
        for t in mesh {
            let (xv, yv) = (x.eval(t).unwrap(), y.eval(t).unwrap());
            prop_assert!(xv <= yv + 10.0 * control.rel_tol * yv.abs().max(1.0), "t = {}: x = {}, y = {}", t, xv, yv);
        }
    }

    #[test]
    fn identical_runs_are_bit_identical(seed in 0u64..1000, label_index in 0usize..8) {
        let e = catalog_entry(POSITIVE_MODELS[label_index], None).unwrap();
        let phi = common::random_history(&mut common::rng(seed), e.model.max_lag().unwrap(), 5, 0.1, 4.0);
        let a = integrate(&e.model, &phi, 15.0, &e.control).unwrap();
        let b = integrate(&e.model, &phi, 15.0, &e.control).unwrap();
        prop_assert_eq!(a.segments(), b.segments());
        prop_assert_eq!(a.t_final().to_bits(), b.t_final().to_bits());
    }
}

#[test]
fn integration_leaves_the_history_untouched() {
    let e = catalog_entry("mg-permanent", None).unwrap();
    let phi = common::random_history(&mut common::rng(5), 1.0, 7, 0.2, 3.0);
    let probe: Vec<f64> = (0..=100).map(|i| phi.eval(-(i as f64) / 100.0)).collect();
    let tr = integrate(&e.model, &phi, 20.0, &StepControl::default()).unwrap();
    let after: Vec<f64> = (0..=100).map(|i| phi.eval(-(i as f64) / 100.0)).collect();
    assert_eq!(probe, after);
    for (i, v) in probe.iter().enumerate() {
        assert_eq!(tr.eval(-(i as f64) / 100.0).unwrap(), *v);
    }
}

#[test]
fn blow_up_time_shrinks_with_the_guard() {
    let m = make_eq7a(0.5).unwrap();
    let phi = HistorySpec::constant(2.0).unwrap();
    let mut last = f64::INFINITY;
    for guard in [1e300, 1e100, 1e30, 1e10, 1e5, 1e3] {
        let control = StepControl { overflow_guard: guard, ..StepControl::default() };
        let tr = integrate(&m, &phi, 20.0, &control).unwrap();
        assert!(tr.blow_up(), "guard {guard:e}");
        assert!(tr.t_final() <= last, "guard {guard:e}: t_final {} after {last}", tr.t_final());
        last = tr.t_final();
    }
}
