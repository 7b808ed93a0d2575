//! TOML model descriptions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::catalog::{
    catalog_entry, make_linear_multi_delay, make_mackey_glass, make_mackey_glass_multi, make_nicholson_multi,
    make_product_delay, make_sine_mg,
};
use super::{DelayKind, DelaySpec, HistorySpec, ModelSpec, TimeFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientConfig {
    Constant(f64),
    Table { breaks: Vec<f64>, values: Vec<f64> },
}

impl CoefficientConfig {
    pub fn build(&self) -> Result<TimeFunction> {
        match self {
            CoefficientConfig::Constant(c) => Ok(TimeFunction::constant(*c)),
            CoefficientConfig::Table { breaks, values } => TimeFunction::steps(breaks.clone(), values.clone()),
        }
    }

    pub fn from_function(c: &TimeFunction) -> Option<Self> {
        match c {
            TimeFunction::Constant(v) => Some(CoefficientConfig::Constant(*v)),
            TimeFunction::Steps { breaks, values } => {
                Some(CoefficientConfig::Table { breaks: breaks.clone(), values: values.clone() })
            }
            TimeFunction::Custom { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DelayConfig {
    Lag {
        lag: f64,
    },
    /// Piecewise-constant delay, treated as unbounded.
    Table {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
}

impl DelayConfig {
    pub fn build(&self) -> Result<DelaySpec> {
        match self {
            DelayConfig::Lag { lag } => DelaySpec::lag(*lag),
            DelayConfig::Table { breaks, values } => {
                DelaySpec::steps(breaks.clone(), values.clone(), DelayKind::Unbounded)
            }
        }
    }

    pub fn from_delay(d: &DelaySpec) -> Option<Self> {
        if let Some(lag) = d.constant_lag() {
            return Some(DelayConfig::Lag { lag });
        }
        match (d.table(), d.kind()) {
            (Some((b, v)), DelayKind::Unbounded) => Some(DelayConfig::Table { breaks: b.to_vec(), values: v.to_vec() }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelConfig {
    MackeyGlass {
        a: CoefficientConfig,
        b: CoefficientConfig,
        n: f64,
        h: DelayConfig,
        p: DelayConfig,
    },
    MackeyGlassMulti {
        a: Vec<CoefficientConfig>,
        exponents: Vec<f64>,
        h: Vec<DelayConfig>,
        p: Vec<DelayConfig>,
        b: CoefficientConfig,
        c: CoefficientConfig,
        n: f64,
    },
    Nicholson {
        a: Vec<CoefficientConfig>,
        lambda: Vec<f64>,
        h: Vec<DelayConfig>,
        g: Vec<DelayConfig>,
        b: CoefficientConfig,
    },
    ProductDelay {
        a: CoefficientConfig,
        b: CoefficientConfig,
        c: CoefficientConfig,
        h: f64,
        g: f64,
        n: f64,
    },
    Linear {
        a: Vec<CoefficientConfig>,
        h: Vec<DelayConfig>,
        b: CoefficientConfig,
    },
    SineMg {
        a: Vec<CoefficientConfig>,
        b: CoefficientConfig,
        c: CoefficientConfig,
        exponents: Vec<f64>,
        n: f64,
        sine_delays: Vec<DelayConfig>,
        delays: Vec<DelayConfig>,
    },
    Catalog {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cycles: Option<u32>,
    },
}

fn coefs(cs: &[CoefficientConfig]) -> Result<Vec<TimeFunction>> {
    cs.iter().map(CoefficientConfig::build).collect()
}

fn delays(ds: &[DelayConfig]) -> Result<Vec<DelaySpec>> {
    ds.iter().map(DelayConfig::build).collect()
}

impl ModelConfig {
    pub fn build(&self) -> Result<ModelSpec> {
        let model = match self {
            ModelConfig::MackeyGlass { a, b, n, h, p } => {
                make_mackey_glass(a.build()?, *n, h.build()?, p.build()?, b.build()?)?
            }
            ModelConfig::MackeyGlassMulti { a, exponents, h, p, b, c, n } => make_mackey_glass_multi(
                coefs(a)?,
                exponents.clone(),
                delays(h)?,
                delays(p)?,
                b.build()?,
                c.build()?,
                *n,
            )?,
            ModelConfig::Nicholson { a, lambda, h, g, b } => {
                make_nicholson_multi(coefs(a)?, lambda.clone(), delays(h)?, delays(g)?, b.build()?)?
            }
            ModelConfig::ProductDelay { a, b, c, h, g, n } => {
                make_product_delay(a.build()?, b.build()?, c.build()?, *h, *g, *n)?
            }
            ModelConfig::Linear { a, h, b } => make_linear_multi_delay(coefs(a)?, delays(h)?, b.build()?)?,
            ModelConfig::SineMg { a, b, c, exponents, n, sine_delays, delays: ds } => make_sine_mg(
                coefs(a)?,
                b.build()?,
                c.build()?,
                exponents.clone(),
                *n,
                delays(sine_delays)?,
                delays(ds)?,
            )?,
            ModelConfig::Catalog { name, cycles } => return Ok(catalog_entry(name, *cycles)?.model),
        };
        Ok(model.with_source(self.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HistoryConfig {
    Constant { constant: f64 },
    Samples { t: Vec<f64>, x: Vec<f64> },
}

impl HistoryConfig {
    pub fn build(&self) -> Result<HistorySpec> {
        match self {
            HistoryConfig::Constant { constant } => HistorySpec::constant(*constant),
            HistoryConfig::Samples { t, x } => HistorySpec::piecewise_linear(t.clone(), x.clone()),
        }
    }
}

/// A model file: optional label and history plus the model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history: Option<HistoryConfig>,
    #[serde(flatten)]
    pub model: ModelConfig,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        ModelFile::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Describes an existing model; fails for models built from closures.
    pub fn from_model(model: &ModelSpec, history: Option<HistoryConfig>) -> Result<Self> {
        let source = model
            .source()
            .ok_or_else(|| Error::Config(format!("model `{}` has no serializable description", model.label())))?;
        Ok(ModelFile { label: Some(model.label().to_string()), history, model: source.clone() })
    }

    pub fn build(&self) -> Result<ModelSpec> {
        let model = self.model.build()?;
        Ok(match &self.label {
            Some(l) => model.with_label(l.clone()),
            None => model,
        })
    }

    pub fn build_history(&self) -> Result<Option<HistorySpec>> {
        self.history.as_ref().map(HistoryConfig::build).transpose()
    }
}
