//! Mackey-Glass equation with unbounded delays: the solution alternates
//! between `2^k` and `2^-(k+1)` at the constructed switch times.

use mixdelay::integrator::{integrate, StepControl};
use mixdelay::model::make_mg_unbounded;

fn main() -> mixdelay::Result<()> {
    let mg = make_mg_unbounded(6)?;
    let tr = integrate(&mg.model, &mg.history, mg.horizon(), &StepControl::default())?;
    println!("{:>4} {:>12} {:>14} {:>14}", "i", "t_i", "target", "x(t_i)");
    for (i, (&t, &target)) in mg.switch_times.iter().zip(&mg.targets).enumerate() {
        println!("{i:>4} {t:>12.6} {target:>14.8} {:>14.8}", tr.eval(t)?);
    }
    Ok(())
}
