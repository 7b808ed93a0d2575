//! Builds a model from a TOML description, writes it back, and simulates it.

use mixdelay::analysis::{classify, ClassifyOptions};
use mixdelay::integrator::{integrate, StepControl};
use mixdelay::model::ModelFile;

const MODEL: &str = r#"
label = "nicholson-two-lags"
kind = "nicholson"
a = [2.0]
lambda = [1.0]
h = [{ lag = 1.0 }]
g = [{ lag = 0.5 }]
b = { breaks = [10.0], values = [1.0, 1.5] }
history = { t = [-1.0, 0.0], x = [0.5, 1.0] }
"#;

fn main() -> mixdelay::Result<()> {
    let file = ModelFile::parse(MODEL)?;
    let model = file.build()?;
    let history = file.build_history()?.expect("history given");
    println!("{}", ModelFile::from_model(&model, file.history.clone())?.to_toml()?);
    let tr = integrate(&model, &history, 60.0, &StepControl::default())?;
    let c = classify(&tr, None, &ClassifyOptions::default())?;
    println!("{} -> tail [{:.6}, {:.6}], growth {:?}", model.label(), c.tail_inf, c.tail_sup, c.growth.flag);
    Ok(())
}
