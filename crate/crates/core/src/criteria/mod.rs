//! Sampled evaluation of the sufficient conditions.
//!
//! Every check evaluates its hypothesis on a finite [`CheckGrid`] and returns
//! a [`CriterionReport`]: `holds` when the sampled quantity clears the
//! threshold by at least `delta`, `fails` when a sampled witness violates it
//! by at least `delta`, `inconclusive` otherwise or when a structural
//! precondition is not met.

mod bounded;
mod envelope;
mod existence;
mod persistence;
mod unbounded;

pub use bounded::{check_bounded_linear, check_bounded_ratio, check_corollary_constant, BoundedVariant};
pub use envelope::Envelope;
pub use existence::{check_existence, ExistenceReport};
pub use persistence::{check_permanent, check_permanent_at, check_persistent, mackey_glass_levels, PersistenceVariant};
pub use unbounded::check_unbounded;

use serde::{Deserialize, Serialize};

use crate::model::{ModelSpec, Monotonicity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriterionId {
    #[serde(rename = "existence-a4_1")]
    ExistenceA41,
    #[serde(rename = "existence-a4_2")]
    ExistenceA42,
    #[serde(rename = "existence-a4_3")]
    ExistenceA43,
    #[serde(rename = "bounded-4a")]
    Bounded4a,
    #[serde(rename = "bounded-4b")]
    Bounded4b,
    #[serde(rename = "bounded-4c")]
    Bounded4c,
    #[serde(rename = "bounded-6")]
    Bounded6,
    #[serde(rename = "bounded-cor2")]
    BoundedCor2,
    #[serde(rename = "persistent-7a")]
    Persistent7a,
    #[serde(rename = "persistent-7b")]
    Persistent7b,
    #[serde(rename = "permanent-8a")]
    Permanent8a,
    #[serde(rename = "unbounded-9")]
    Unbounded9,
}

impl CriterionId {
    pub const ALL: [CriterionId; 12] = [
        CriterionId::ExistenceA41,
        CriterionId::ExistenceA42,
        CriterionId::ExistenceA43,
        CriterionId::Bounded4a,
        CriterionId::Bounded4b,
        CriterionId::Bounded4c,
        CriterionId::Bounded6,
        CriterionId::BoundedCor2,
        CriterionId::Persistent7a,
        CriterionId::Persistent7b,
        CriterionId::Permanent8a,
        CriterionId::Unbounded9,
    ];

    pub fn name(&self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// A grid point: time, delayed arguments, current state and the quantity tested there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub args: Vec<f64>,
    pub state: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: CriterionId,
    pub verdict: Verdict,
    /// Signed distance of the decisive sampled quantity from its threshold.
    pub margin: f64,
    pub evidence: Vec<Sample>,
    pub grid: String,
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(criterion: CriterionId, verdict: Verdict, margin: f64, grid: &CheckGrid) -> Self {
        CriterionReport { criterion, verdict, margin, evidence: Vec::new(), grid: grid.describe(), notes: Vec::new() }
    }

    fn not_applicable(criterion: CriterionId, grid: &CheckGrid, why: impl Into<String>) -> Self {
        CriterionReport::new(criterion, Verdict::Inconclusive, 0.0, grid)
            .note(format!("not applicable: {}", why.into()))
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    fn with(mut self, s: Sample) -> Self {
        self.evidence.push(s);
        self
    }

    /// The first evidence sample; present on every `fails` verdict.
    pub fn witness(&self) -> Option<&Sample> {
        self.evidence.first()
    }
}

/// Finite sampling grids used by every check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckGrid {
    pub t_max: f64,
    pub t_points: usize,
    pub delta: f64,
    pub large_u: Vec<f64>,
    pub small_u: Vec<f64>,
    pub existence_x: Vec<f64>,
    pub k_grid: Vec<f64>,
    /// Candidate levels for the permanence search.
    pub levels: Vec<f64>,
    /// Relative width of the `u` ranges next to a permanence level.
    pub level_span: f64,
    pub level_points: usize,
    /// Samples for the minimum-lag scan.
    pub lag_points: usize,
}

impl Default for CheckGrid {
    fn default() -> Self {
        CheckGrid {
            t_max: 200.0,
            t_points: 400,
            delta: 0.01,
            large_u: vec![10.0, 1e2, 1e3, 1e4],
            small_u: vec![1e-1, 1e-2, 1e-3, 1e-4],
            existence_x: vec![10.0, 1e2, 1e3],
            k_grid: vec![1.0, 2.0, 5.0, 10.0, 1e2, 1e3],
            levels: (-240..=240).map(|k| 10f64.powf(k as f64 / 40.0)).collect(),
            level_span: 1e4,
            level_points: 41,
            lag_points: 20_000,
        }
    }
}

fn refine_geometric(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * v.len());
    for (i, &x) in v.iter().enumerate() {
        if i > 0 {
            out.push((v[i - 1] * x).sqrt());
        }
        out.push(x);
    }
    out
}

impl CheckGrid {
    pub fn times(&self) -> Vec<f64> {
        let n = self.t_points.max(2);
        (0..n).map(|i| self.t_max * i as f64 / (n - 1) as f64).collect()
    }

    /// The same grid with doubled density.
    pub fn refined(&self) -> Self {
        CheckGrid {
            t_points: 2 * self.t_points,
            large_u: refine_geometric(&self.large_u),
            small_u: refine_geometric(&self.small_u),
            level_points: 2 * self.level_points,
            lag_points: 2 * self.lag_points,
            ..self.clone()
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "t in [0, {}] ({} points), large u {:?}, small u {:?}, delta {}",
            self.t_max, self.t_points, self.large_u, self.small_u, self.delta
        )
    }

    /// Verdict for a hypothesis of the form `q < 1` given the sampled maximum.
    fn below_one(&self, max: f64) -> Verdict {
        if max <= 1.0 - self.delta {
            Verdict::Holds
        } else if max >= 1.0 + self.delta {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }

    /// Verdict for a hypothesis of the form `q > 1` given the sampled minimum.
    fn above_one(&self, min: f64) -> Verdict {
        if min >= 1.0 + self.delta {
            Verdict::Holds
        } else if min <= 1.0 - self.delta {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }
}

pub(crate) fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Extremum of `production(t, args) / g(t, state)` over a set of points.
struct RatioScan {
    value: f64,
    at: Sample,
}

enum ScanError {
    /// `g` vanishes at a positive state.
    ZeroMortality(Sample),
}

fn scan_ratio(
    model: &ModelSpec,
    times: &[f64],
    points: &[(Vec<f64>, f64)],
    maximize: bool,
) -> Result<RatioScan, ScanError> {
    let mut best: Option<RatioScan> = None;
    for &t in times {
        for (args, state) in points {
            let g = model.mortality().eval(t, *state);
            let f = model.production(t, args);
            if !(g > 0.0) {
                return Err(ScanError::ZeroMortality(Sample { t, args: args.clone(), state: *state, value: g }));
            }
            let r = f / g;
            let better = match &best {
                None => true,
                Some(b) => (maximize && r > b.value) || (!maximize && r < b.value),
            };
            if better {
                best = Some(RatioScan { value: r, at: Sample { t, args: args.clone(), state: *state, value: r } });
            }
        }
    }
    Ok(best.expect("nonempty scan"))
}

/// Indices of arguments grouped by combined monotonicity.
struct ArgClasses {
    increasing: Vec<usize>,
    decreasing: Vec<usize>,
    independent: Vec<usize>,
    mixed: Vec<usize>,
}

impl ArgClasses {
    fn of(model: &ModelSpec) -> Self {
        let mut c = ArgClasses { increasing: vec![], decreasing: vec![], independent: vec![], mixed: vec![] };
        for (j, tag) in model.combined_monotonicity().into_iter().enumerate() {
            match tag {
                Monotonicity::Increasing => c.increasing.push(j),
                Monotonicity::Decreasing => c.decreasing.push(j),
                Monotonicity::Independent => c.independent.push(j),
                Monotonicity::None => c.mixed.push(j),
            }
        }
        c
    }
}

/// Values tried for arguments without a usable monotonicity.
const MIXED_SAMPLES: [f64; 8] = [0.0, 1e-2, 0.1, 1.0, 10.0, 1e2, 1e3, 1e4];

/// All argument vectors with `fixed` entries set and each `free` slot ranging over `values`.
fn product_points(arity: usize, fixed: &[(usize, f64)], free: &[usize], values: &[f64]) -> Vec<Vec<f64>> {
    let mut base = vec![0.0; arity];
    for &(j, v) in fixed {
        base[j] = v;
    }
    let mut out = vec![base];
    for &j in free {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q[j] = v;
                    q
                })
            })
            .collect();
        if out.len() > 4096 {
            break;
        }
    }
    out
}

/// Every check on the default grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model: String,
    pub reports: Vec<CriterionReport>,
    pub envelope: Option<Envelope>,
}

impl ModelReport {
    pub fn get(&self, id: CriterionId) -> Option<&CriterionReport> {
        self.reports.iter().find(|r| r.criterion == id)
    }

    pub fn verdict(&self, id: CriterionId) -> Option<Verdict> {
        self.get(id).map(|r| r.verdict)
    }
}

pub fn check_all(model: &ModelSpec, grid: &CheckGrid) -> ModelReport {
    let ex = check_existence(model, grid);
    let (perm, envelope) = check_permanent(model, grid);
    let reports = vec![
        ex.a4_1,
        ex.a4_2,
        ex.a4_3,
        check_bounded_ratio(model, BoundedVariant::A, grid),
        check_bounded_ratio(model, BoundedVariant::B, grid),
        check_bounded_ratio(model, BoundedVariant::C, grid),
        check_bounded_linear(model, grid),
        check_corollary_constant(model, grid),
        check_persistent(model, PersistenceVariant::A, grid),
        check_persistent(model, PersistenceVariant::B, grid),
        perm,
        check_unbounded(model, grid),
    ];
    ModelReport { model: model.label().to_string(), reports, envelope }
}
