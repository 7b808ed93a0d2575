#![allow(dead_code)]

use mixdelay::model::HistorySpec;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Piecewise-linear history on `[-depth, 0]` with `nodes` values drawn from `[lo, hi]`.
pub fn random_history(rng: &mut ChaCha8Rng, depth: f64, nodes: usize, lo: f64, hi: f64) -> HistorySpec {
    let ts: Vec<f64> = (0..nodes).map(|i| -depth + depth * i as f64 / (nodes - 1) as f64).collect();
    let xs: Vec<f64> = (0..nodes).map(|_| rng.gen_range(lo..=hi)).collect();
    let mut ts = ts;
    *ts.last_mut().unwrap() = 0.0;
    HistorySpec::piecewise_linear(ts, xs).expect("valid random history")
}

/// Classical RK4 for `x' = F(x(t - lag), x(t))` with constant `lag` and constant history,
/// step `lag / m`. Delayed midpoints use the cubic Hermite interpolant of stored nodes.
pub fn rk4_constant_lag(rhs: impl Fn(f64, f64) -> f64, lag: f64, phi: f64, m: usize, horizon: f64) -> Vec<(f64, f64)> {
    let dt = lag / m as f64;
    let n = (horizon / dt).round() as usize;
    let mut xs = vec![phi];
    let mut ds = vec![0.0];
    let delayed = |xs: &[f64], ds: &[f64], i: usize, half: bool| -> f64 {
        // Node index of t_i - lag, plus half a step when requested.
        if i < m {
            return phi;
        }
        let j = i - m;
        if !half {
            return xs[j];
        }
        if j + 1 >= xs.len() {
            return xs[j];
        }
        0.5 * (xs[j] + xs[j + 1]) + dt * (ds[j] - ds[j + 1]) / 8.0
    };
    let mut out = vec![(0.0, phi)];
    for i in 0..n {
        let x = xs[i];
        let d0 = delayed(&xs, &ds, i, false);
        let dm = delayed(&xs, &ds, i, true);
        let d1 = delayed(&xs, &ds, i + 1, false);
        let k1 = rhs(d0, x);
        if i == 0 {
            ds[0] = k1;
        }
        let k2 = rhs(dm, x + 0.5 * dt * k1);
        let k3 = rhs(dm, x + 0.5 * dt * k2);
        let k4 = rhs(d1, x + dt * k3);
        let next = x + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        xs.push(next);
        ds.push(rhs(delayed(&xs, &ds, i + 1, false), next));
        out.push(((i + 1) as f64 * dt, next));
    }
    out
}

/// First time the sampled path reaches `level`, linearly interpolated.
pub fn first_crossing(path: &[(f64, f64)], level: f64) -> Option<f64> {
    path.windows(2).find(|w| w[0].1 < level && w[1].1 >= level).map(|w| {
        let ((t0, x0), (t1, x1)) = (w[0], w[1]);
        t0 + (level - x0) * (t1 - t0) / (x1 - x0)
    })
}
