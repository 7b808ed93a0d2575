//! Sweeps the Mackey-Glass production rate and tabulates verdicts and tail ranges.

use mixdelay::sweep::{run_sweep, write_sweep_csv, SweepConfig};

const CONFIG: &str = r#"
horizon = 50.0

[params]
a = [0.5, 1.0, 2.0, 4.0]

[base]
kind = "mackey-glass"
a = 1.0
b = 1.0
n = 2.0
h = { lag = 1.0 }
p = { lag = 1.0 }
"#;

fn main() -> mixdelay::Result<()> {
    let cfg = SweepConfig::parse(CONFIG)?;
    let rows = run_sweep(&cfg)?;
    write_sweep_csv(&rows, std::io::stdout())
}
