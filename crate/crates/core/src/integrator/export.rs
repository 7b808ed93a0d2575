use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{StepStats, Trajectory};
use crate::error::Result;

/// Run metadata written next to every trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub model: String,
    pub history: String,
    pub horizon: f64,
    pub t_final: f64,
    pub final_value: f64,
    pub blow_up: bool,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub positivity_floor: f64,
    pub negativity_violations: usize,
    pub breakpoints: Vec<f64>,
    pub stats: StepStats,
    /// Arguments that reproduce the run.
    pub command: Vec<String>,
}

impl Manifest {
    pub fn new(traj: &Trajectory, command: Vec<String>) -> Self {
        Manifest {
            model: traj.label().to_string(),
            history: traj.history().description().to_string(),
            horizon: traj.horizon(),
            t_final: traj.t_final(),
            final_value: traj.final_value(),
            blow_up: traj.blow_up(),
            rel_tol: traj.control().rel_tol,
            abs_tol: traj.control().abs_tol,
            positivity_floor: traj.positivity_floor(),
            negativity_violations: traj.negativity_violations(),
            breakpoints: traj.breakpoints().to_vec(),
            stats: traj.stats(),
            command,
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct Row {
    t: f64,
    x: f64,
}

/// Writes the mesh nodes, every `stride`-th one, always keeping the last.
pub fn write_trajectory_csv(traj: &Trajectory, path: impl AsRef<Path>, stride: usize) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mesh = traj.mesh();
    let stride = stride.max(1);
    for (i, &(t, x)) in mesh.iter().enumerate() {
        if i % stride == 0 || i + 1 == mesh.len() {
            w.serialize(Row { t, x })?;
        }
    }
    w.flush()?;
    Ok(())
}
