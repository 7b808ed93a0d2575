//! Which of the three existence conditions each of the three test equations meets.

use mixdelay::criteria::{check_existence, CheckGrid};
use mixdelay::model::{make_eq7a, make_eq7b, make_eq7c};

fn main() -> mixdelay::Result<()> {
    let grid = CheckGrid::default();
    let models = [
        ("x' = x(t - 1)^2", make_eq7a(1.0)?),
        ("x' = x(t - |sin t|)", make_eq7b()?),
        ("x' = x(t - |sin t|)^2 / (1 + x^2) - x^3", make_eq7c()?),
    ];
    for (name, m) in models {
        let r = check_existence(&m, &grid);
        println!("{name}");
        for c in [&r.a4_1, &r.a4_2, &r.a4_3] {
            println!("  {:<16} {:?}", c.criterion.name(), c.verdict);
        }
    }
    Ok(())
}
