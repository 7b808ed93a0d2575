//! Command-line front end.
//!
//! Exit codes: `0` success, `1` evaluation fault or failed reproduction,
//! `2` usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{classify, ClassificationResult, ClassifyOptions, GrowthFlag};
use crate::criteria::{check_all, check_permanent, check_permanent_at, CheckGrid, CriterionId, ModelReport, Verdict};
use crate::error::{Error, Result};
use crate::integrator::{integrate, write_trajectory_csv, Manifest, StepControl, Trajectory};
use crate::model::{
    catalog_entry, catalog_labels, make_example1, make_mg_unbounded, HistorySpec, ModelFile, ModelSpec,
};
use crate::sweep::{run_sweep, write_sweep_csv, SweepConfig};

#[derive(Debug, Parser)]
#[command(name = "mixdelay", version, about = "Simulate and classify scalar delay equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a model and write the trajectory (CSV) and manifest (JSON).
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Output path stem; `.csv` and `.json` are appended.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep every n-th mesh node in the CSV.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Evaluate every criterion and print the JSON report.
    Check {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate and classify the long-time behaviour.
    Classify {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 0.5)]
        tail_fraction: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 100.0, 1000.0])]
        thresholds: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun a catalog example and compare against its known values.
    Reproduce {
        label: String,
        #[arg(long)]
        cycles: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep described by a TOML file and write a CSV table.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Catalog label.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub model: Option<String>,
    /// TOML model file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of cycles for the switching examples.
    #[arg(long)]
    pub cycles: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// A number or `auto`.
    #[arg(long, default_value = "auto")]
    pub horizon: String,
    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
}

/// A fully resolved simulation request.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub history: HistorySpec,
    pub horizon: f64,
    pub control: StepControl,
    pub period: Option<f64>,
}

impl ModelArgs {
    fn resolve(&self) -> Result<(ModelSpec, HistorySpec, f64, Option<f64>, StepControl)> {
        match (&self.model, &self.config) {
            (Some(label), None) => {
                let e = catalog_entry(label, self.cycles)?;
                Ok((e.model, e.history, e.horizon, e.period, e.control))
            }
            (None, Some(path)) => {
                let file = ModelFile::load(path)?;
                let model = file.build()?;
                let history = match file.build_history()? {
                    Some(h) => h,
                    None => HistorySpec::constant(1.0)?,
                };
                let horizon = 100.0 * model.max_lag().filter(|&t| t > 0.0).unwrap_or(1.0);
                Ok((model, history, horizon, None, StepControl::default()))
            }
            _ => Err(Error::Config("give exactly one of --model and --config".into())),
        }
    }
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let (model, history, auto, period, base) = self.model.resolve()?;
        let horizon = if self.horizon == "auto" {
            auto
        } else {
            self.horizon
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("--horizon expects a number or `auto`, got `{}`", self.horizon)))?
        };
        let control = StepControl { rel_tol: self.rel_tol, abs_tol: self.abs_tol, ..base };
        Ok(RunConfig { model, history, horizon, control, period })
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::UnknownLabel(_) | Error::InvalidParameter { .. } => 2,
        _ => 1,
    }
}

fn emit<T: Serialize>(value: &T, path: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => writeln!(stdout, "{text}")?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(cli.command, command, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, argv: Vec<String>, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Simulate { run, out, stride } => {
            let cfg = run.resolve()?;
            let (traj, manifest) = cmd_simulate(&cfg, argv)?;
            let stem = out.unwrap_or_else(|| PathBuf::from(cfg.model.label()));
            write_trajectory_csv(&traj, stem.with_extension("csv"), stride)?;
            manifest.write(stem.with_extension("json"))?;
            emit(&manifest, None, stdout)?;
            Ok(0)
        }
        Command::Check { model, out } => {
            let (m, ..) = model.resolve()?;
            emit(&cmd_check(&m), out.as_ref(), stdout)?;
            Ok(0)
        }
        Command::Classify { run, tail_fraction, thresholds, out } => {
            let cfg = run.resolve()?;
            let opts = ClassifyOptions { tail_fraction, thresholds, period: cfg.period, ..Default::default() };
            let result = cmd_classify(&cfg, &opts, argv)?;
            emit(&result, out.as_ref(), stdout)?;
            Ok(0)
        }
        Command::Reproduce { label, cycles, out } => {
            let table = cmd_reproduce(&label, cycles)?;
            writeln!(stdout, "{}", table.render())?;
            if let Some(p) = out {
                emit(&table, Some(&p), stdout)?;
            }
            Ok(if table.passed() { 0 } else { 1 })
        }
        Command::Sweep { config, out } => {
            let cfg = SweepConfig::load(&config)?;
            let rows = run_sweep(&cfg)?;
            match out {
                Some(p) => write_sweep_csv(&rows, std::fs::File::create(p)?)?,
                None => write_sweep_csv(&rows, &mut *stdout)?,
            }
            Ok(0)
        }
    }
}

pub fn cmd_simulate(cfg: &RunConfig, argv: Vec<String>) -> Result<(Trajectory, Manifest)> {
    let traj = integrate(&cfg.model, &cfg.history, cfg.horizon, &cfg.control)?;
    let manifest = Manifest::new(&traj, argv);
    Ok((traj, manifest))
}

pub fn cmd_check(model: &ModelSpec) -> ModelReport {
    check_all(model, &CheckGrid::default())
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyOutput {
    pub manifest: Manifest,
    pub classification: ClassificationResult,
}

pub fn cmd_classify(cfg: &RunConfig, opts: &ClassifyOptions, argv: Vec<String>) -> Result<ClassifyOutput> {
    let (traj, manifest) = cmd_simulate(cfg, argv)?;
    let (_, envelope) = check_permanent(&cfg.model, &CheckGrid::default());
    let classification = classify(&traj, envelope.as_ref(), opts)?;
    Ok(ClassifyOutput { manifest, classification })
}

/// One line of a reproduction table.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub quantity: String,
    pub expected: String,
    pub measured: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceTable {
    pub label: String,
    pub rows: Vec<Row>,
}

impl ReproduceTable {
    fn push(
        &mut self,
        quantity: impl Into<String>,
        expected: impl Into<String>,
        measured: impl Into<String>,
        ok: bool,
    ) {
        self.rows.push(Row { quantity: quantity.into(), expected: expected.into(), measured: measured.into(), ok });
    }

    fn verdict(&mut self, report: &ModelReport, id: CriterionId, want: Verdict) {
        let got = report.verdict(id);
        let measured = got.map_or("missing".to_string(), |v| format!("{v:?}"));
        self.push(id.name(), format!("{want:?}"), measured, got == Some(want));
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn render(&self) -> String {
        let mut s = format!("{}\n{:<32} {:>24} {:>24}  status\n", self.label, "quantity", "expected", "measured");
        for r in &self.rows {
            let status = if r.ok { "ok" } else { "MISMATCH" };
            s.push_str(&format!("{:<32} {:>24} {:>24}  {status}\n", r.quantity, r.expected, r.measured));
        }
        s
    }
}

pub fn cmd_reproduce(label: &str, cycles: Option<u32>) -> Result<ReproduceTable> {
    if !catalog_labels().contains(&label) {
        return Err(Error::UnknownLabel(label.to_string()));
    }
    let mut t = ReproduceTable { label: label.to_string(), rows: Vec::new() };
    let grid = CheckGrid::default();
    let control = StepControl::default();
    match label {
        "example1" => {
            let ex = make_example1()?;
            let n = cycles.unwrap_or(10) as f64;
            let traj = integrate(&ex.model, &ex.history, n * ex.period, &control)?;
            let err = traj
                .sample(0.0, traj.t_final(), 20_000)
                .iter()
                .chain(traj.mesh().iter())
                .map(|&(s, x)| (x - ex.closed_form(s)).abs())
                .fold(0.0, f64::max);
            t.push("max |x - closed form|", "<= 1e-6", format!("{err:.3e}"), err <= 1e-6);
            let c = classify(&traj, None, &ClassifyOptions { period: Some(ex.period), ..Default::default() })?;
            t.push("tail min", "0.5", format!("{:.9}", c.tail_inf), (c.tail_inf - 0.5).abs() <= 1e-4);
            t.push("tail max", "4", format!("{:.9}", c.tail_sup), (c.tail_sup - 4.0).abs() <= 1e-4);
            let res = c.period_residual.unwrap_or(f64::INFINITY);
            t.push("period residual", "<= 1e-6", format!("{res:.3e}"), res <= 1e-6);
        }
        "mg-unbounded" => {
            let mg = make_mg_unbounded(cycles.unwrap_or(8) as usize)?;
            let traj = integrate(&mg.model, &mg.history, mg.horizon(), &control)?;
            for (i, (&s, &target)) in mg.switch_times.iter().zip(&mg.targets).enumerate().skip(1) {
                let x = traj.eval(s)?;
                let rel = (x - target).abs() / target;
                t.push(format!("x(t_{i}), t_{i} = {s:.6}"), format!("{target}"), format!("{x:.9}"), rel <= 1e-5);
            }
        }
        "mg-permanent" => {
            let e = catalog_entry(label, None)?;
            let (rep, env) = check_permanent_at(&e.model, 1.1, 0.9, &grid);
            t.push(
                "permanent-8a at M = 1.1, mu = 0.9",
                "Holds",
                format!("{:?}", rep.verdict),
                rep.verdict == Verdict::Holds,
            );
            let traj = integrate(&e.model, &e.history, e.horizon, &control)?;
            let c = classify(&traj, env.as_ref(), &ClassifyOptions::default())?;
            let inside = c.envelope.as_ref().is_some_and(|x| x.inside);
            let expected = env.map_or("envelope".to_string(), |e| format!("[{:.5}, {:.2}]", e.lower, e.upper));
            t.push("tail inside envelope", expected, format!("[{:.5}, {:.5}]", c.tail_inf, c.tail_sup), inside);
        }
        "product-unbounded" | "linear-unbounded" => {
            let e = catalog_entry(label, None)?;
            let report = check_all(&e.model, &grid);
            t.verdict(&report, CriterionId::Unbounded9, Verdict::Holds);
            let traj = integrate(&e.model, &e.history, e.horizon, &e.control)?;
            let c = classify(&traj, None, &ClassifyOptions::default())?;
            t.push("growth", "Growing", format!("{:?}", c.growth.flag), c.growth.flag == GrowthFlag::Growing);
        }
        _ => {
            let e = catalog_entry(label, cycles)?;
            let report = check_all(&e.model, &grid);
            for r in &report.reports {
                t.push(r.criterion.name(), "-", format!("{:?}", r.verdict), true);
            }
            let traj = integrate(&e.model, &e.history, e.horizon, &e.control)?;
            t.push("t_final", format!("{}", e.horizon), format!("{}", traj.t_final()), true);
        }
    }
    Ok(t)
}
