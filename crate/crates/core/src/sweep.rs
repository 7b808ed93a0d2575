//! Parameter sweeps over a model file.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{classify, ClassifyOptions, GrowthFlag};
use crate::criteria::{check_all, CheckGrid, CriterionId, Verdict};
use crate::error::{Error, Result};
use crate::integrator::{integrate, StepControl};
use crate::model::{HistorySpec, ModelFile};

fn default_tail() -> f64 {
    0.5
}

fn default_thresholds() -> Vec<f64> {
    vec![10.0, 1e2, 1e3]
}

/// A base model plus a list of values for each swept key.
///
/// Keys address fields of the model file; dotted keys reach nested tables
/// (`h.lag`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: ModelFile,
    pub params: BTreeMap<String, Vec<f64>>,
    pub horizon: f64,
    #[serde(default = "default_tail")]
    pub tail_fraction: f64,
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<f64>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        SweepConfig::parse(&text)
    }

    /// Cartesian product of the swept values in key order.
    pub fn points(&self) -> Vec<Vec<(String, f64)>> {
        let mut out = vec![Vec::new()];
        for (k, vals) in &self.params {
            out = out
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push((k.clone(), v));
                        q
                    })
                })
                .collect();
        }
        out
    }
}

fn with_params(base: &ModelFile, params: &[(String, f64)]) -> Result<ModelFile> {
    let mut value = toml::Table::try_from(base).map_err(|e| Error::Config(e.to_string()))?;
    for (key, v) in params {
        let mut parts: Vec<&str> = key.split('.').collect();
        let last = parts.pop().unwrap();
        let mut table = &mut value;
        for p in parts {
            table = table
                .get_mut(p)
                .and_then(|t| t.as_table_mut())
                .ok_or_else(|| Error::Config(format!("sweep key `{key}` does not address a table")))?;
        }
        if !table.contains_key(last) {
            return Err(Error::Config(format!("sweep key `{key}` not present in the base model")));
        }
        table.insert(last.to_string(), toml::Value::Float(*v));
    }
    value.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Vec<(String, f64)>,
    pub verdicts: Vec<(CriterionId, Verdict)>,
    pub t_final: f64,
    pub blow_up: bool,
    pub tail_inf: f64,
    pub tail_sup: f64,
    pub growth: Option<GrowthFlag>,
    pub error: Option<String>,
}

fn run_point(cfg: &SweepConfig, params: Vec<(String, f64)>) -> SweepRow {
    let mut row = SweepRow {
        params: params.clone(),
        verdicts: Vec::new(),
        t_final: 0.0,
        blow_up: false,
        tail_inf: f64::NAN,
        tail_sup: f64::NAN,
        growth: None,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let file = with_params(&cfg.base, &params)?;
        let model = file.build()?;
        let history = match file.build_history()? {
            Some(h) => h,
            None => HistorySpec::constant(1.0)?,
        };
        let report = check_all(&model, &CheckGrid::default());
        row.verdicts = report.reports.iter().map(|r| (r.criterion, r.verdict)).collect();
        let traj = integrate(&model, &history, cfg.horizon, &StepControl::default())?;
        let opts = ClassifyOptions {
            tail_fraction: cfg.tail_fraction,
            thresholds: cfg.thresholds.clone(),
            ..Default::default()
        };
        let c = classify(&traj, None, &opts)?;
        row.t_final = c.t_final;
        row.blow_up = c.blow_up;
        row.tail_inf = c.tail_inf;
        row.tail_sup = c.tail_sup;
        row.growth = Some(c.growth.flag);
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
    }
    row
}

/// Runs every grid point in parallel; rows come back in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let points = cfg.points();
    let Some(first) = points.first() else {
        return Err(Error::Config("sweep grid is empty".into()));
    };
    with_params(&cfg.base, first)?;
    Ok(points.into_par_iter().map(|p| run_point(cfg, p)).collect())
}

fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

pub fn write_sweep_csv(rows: &[SweepRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let Some(first) = rows.first() else {
        return Ok(());
    };
    let mut header: Vec<String> = first.params.iter().map(|(k, _)| k.clone()).collect();
    header.extend(CriterionId::ALL.iter().map(|c| c.name()));
    header.extend(["t_final", "blow_up", "tail_inf", "tail_sup", "growth", "error"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = r.params.iter().map(|(_, v)| v.to_string()).collect();
        for id in CriterionId::ALL {
            let v = r.verdicts.iter().find(|(c, _)| *c == id).map(|(_, v)| label(v)).unwrap_or_default();
            rec.push(v);
        }
        rec.push(r.t_final.to_string());
        rec.push(r.blow_up.to_string());
        rec.push(r.tail_inf.to_string());
        rec.push(r.tail_sup.to_string());
        rec.push(r.growth.map(|g| label(&g)).unwrap_or_default());
        rec.push(r.error.clone().unwrap_or_default());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: &str = r#"
        horizon = 20.0
        [params]
        a = [0.5, 2.0]
        "h.lag" = [1.0]
        [base]
        kind = "mackey-glass"
        a = 1.0
        b = 1.0
        n = 2.0
        h = { lag = 1.0 }
        p = { lag = 0.5 }
    "#;

    #[test]
    fn expands_grid_in_order() {
        let cfg = SweepConfig::parse(CFG).unwrap();
        let pts = cfg.points();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1][0], ("a".to_string(), 2.0));
        let f = with_params(&cfg.base, &pts[1]).unwrap();
        let m = f.build().unwrap();
        assert_eq!(m.rhs(0.0, &[1.0, 0.0], 0.0), 2.0);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let mut cfg = SweepConfig::parse(CFG).unwrap();
        cfg.params.insert("b".into(), vec![]);
        assert!(matches!(run_sweep(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_key_is_rejected() {
        let cfg = SweepConfig::parse(CFG).unwrap();
        assert!(with_params(&cfg.base, &[("zzz".into(), 1.0)]).is_err());
    }
}
