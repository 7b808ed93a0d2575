//! Searches permanence levels for a Mackey-Glass model and checks simulated
//! tails against the resulting envelope.

use mixdelay::analysis::{classify, ClassifyOptions};
use mixdelay::criteria::{check_permanent, CheckGrid};
use mixdelay::integrator::{integrate, StepControl};
use mixdelay::model::{catalog_entry, HistorySpec};

fn main() -> mixdelay::Result<()> {
    let e = catalog_entry("mg-permanent", None)?;
    let (report, envelope) = check_permanent(&e.model, &CheckGrid::default());
    println!("permanent-8a: {:?} (margin {:.4})", report.verdict, report.margin);
    let Some(env) = envelope else {
        println!("no envelope");
        return Ok(());
    };
    println!("M = {:.4}, mu = {:.4}, envelope [{:.4}, {:.2}]", env.m, env.mu, env.lower, env.upper);
    for c in [0.2, 1.0, 5.0, 50.0] {
        let tr = integrate(&e.model, &HistorySpec::constant(c)?, 200.0, &StepControl::default())?;
        let r = classify(&tr, Some(&env), &ClassifyOptions::default())?;
        let inside = r.envelope.is_some_and(|x| x.inside);
        println!("phi = {c:>5}: tail [{:.6}, {:.6}] inside = {inside}", r.tail_inf, r.tail_sup);
    }
    Ok(())
}
