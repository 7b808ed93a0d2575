//! Observed order of the fixed-step integrator, with and without stepping
//! onto derivative discontinuities.

use mixdelay::integrator::{convergence_order, ConvergenceOptions};
use mixdelay::model::make_example1;

fn main() -> mixdelay::Result<()> {
    let ex = make_example1()?;
    let exact = |t: f64| ex.closed_form(t);
    for honor in [true, false] {
        let est = convergence_order(
            &ex.model,
            &ex.history,
            2.0 * ex.period,
            &exact,
            &ConvergenceOptions::halving(0.2, 5, honor),
        )?;
        println!("breakpoints honored = {honor}: order {:.2}", est.order);
        for (h, e) in est.steps.iter().zip(&est.errors) {
            println!("  h = {h:<8} error = {e:.3e}");
        }
    }
    Ok(())
}
