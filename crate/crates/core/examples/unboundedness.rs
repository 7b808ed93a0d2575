//! Unboundedness test on the product-delay equation and threshold crossing
//! times of a simulated solution.

use mixdelay::analysis::growth_probe;
use mixdelay::criteria::{check_unbounded, CheckGrid};
use mixdelay::integrator::integrate;
use mixdelay::model::catalog_entry;

fn main() -> mixdelay::Result<()> {
    for label in ["product-unbounded", "linear-unbounded"] {
        let e = catalog_entry(label, None)?;
        let r = check_unbounded(&e.model, &CheckGrid::default());
        println!("{label}: unbounded-9 {:?}", r.verdict);
        for s in &r.evidence {
            println!("  K = {:>6}  a_K = {:.4e}", s.state, s.value);
        }
        let tr = integrate(&e.model, &e.history, 40.0, &e.control)?;
        let probe = growth_probe(&tr, &[10.0, 1e2, 1e3]);
        for (l, c) in probe.thresholds.iter().zip(&probe.crossings) {
            println!("  crosses {l:>6} at {c:?}");
        }
    }
    Ok(())
}
