//! Comparison of two finished runs: final-state gaps and the localization
//! of deaths around the density peak.

use super::pipeline::RunArtifacts;
use crate::error::{Error, Result};
use crate::io;
use crate::numerics::{argmax, ExactSum};
use crate::torus::torus_distance;
use std::fmt;
use std::path::Path;

/// Radius of the "near the peak" band used by the localization ratio.
pub const LOCALIZATION_RADIUS: f64 = 0.1;

/// Per-compartment sup-norm gaps of the final states plus localization and
/// spread measures per run.
#[derive(Clone, Debug)]
pub struct CompareReport {
    /// Sup-norm gap of the final S, E, I, R, D fields between the runs.
    pub final_gaps: [f64; 5],
    /// Share of final deaths within torus distance 0.1 of the density
    /// peak, for each run.
    pub localization: (f64, f64),
    /// Spatial variance of the final death field, for each run.
    pub final_d_variance: (f64, f64),
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["S", "E", "I", "R", "D"];
        for (name, gap) in names.iter().zip(self.final_gaps.iter()) {
            writeln!(f, "final_gap_{name} = {gap}")?;
        }
        writeln!(f, "localization_a = {}", self.localization.0)?;
        writeln!(f, "localization_b = {}", self.localization.1)?;
        writeln!(f, "final_d_variance_a = {}", self.final_d_variance.0)?;
        writeln!(f, "final_d_variance_b = {}", self.final_d_variance.1)
    }
}

/// Compare two run directories. Both must share the grid and the horizon.
pub fn compare_runs(dir_a: &Path, dir_b: &Path) -> Result<CompareReport> {
    let art_a = RunArtifacts::load(dir_a)?;
    let art_b = RunArtifacts::load(dir_b)?;
    let traj_a = io::read_trajectory(&art_a.trajectory_csv)?;
    let traj_b = io::read_trajectory(&art_b.trajectory_csv)?;
    if traj_a.grid != traj_b.grid {
        return Err(Error::config(format!(
            "grid mismatch: {} vs {} nodes",
            traj_a.grid.n_x(),
            traj_b.grid.n_x()
        )));
    }
    let t_a = traj_a.final_snapshot().t;
    let t_b = traj_b.final_snapshot().t;
    if (t_a - t_b).abs() > 1e-9 {
        return Err(Error::config(format!(
            "horizon mismatch: {t_a} vs {t_b} days"
        )));
    }

    let last_a = traj_a.final_snapshot();
    let last_b = traj_b.final_snapshot();
    let sup_gap = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0_f64, f64::max)
    };
    let final_gaps = [
        sup_gap(&last_a.s, &last_b.s),
        sup_gap(&last_a.e, &last_b.e),
        sup_gap(&last_a.i, &last_b.i),
        sup_gap(&last_a.r, &last_b.r),
        sup_gap(&last_a.d, &last_b.d),
    ];

    let loc_a = localization_ratio(&art_a, &last_a.d)?;
    let loc_b = localization_ratio(&art_b, &last_b.d)?;

    Ok(CompareReport {
        final_gaps,
        localization: (loc_a, loc_b),
        final_d_variance: (variance(&last_a.d), variance(&last_b.d)),
    })
}

/// Mass of final deaths within [`LOCALIZATION_RADIUS`] of the density peak,
/// relative to all final deaths.
fn localization_ratio(artifacts: &RunArtifacts, final_d: &[f64]) -> Result<f64> {
    let (grid, mu) = io::read_spatial_density(&artifacts.density_csv)?;
    if mu.len() != final_d.len() {
        return Err(Error::config(format!(
            "density and trajectory grids differ in {}",
            artifacts.dir.display()
        )));
    }
    let peak = grid.node(argmax(&mu));
    let mut near = ExactSum::new();
    let mut total = ExactSum::new();
    for (k, &d) in final_d.iter().enumerate() {
        total.add(d);
        if torus_distance(grid.node(k), peak) <= LOCALIZATION_RADIUS {
            near.add(d);
        }
    }
    let total = total.value();
    if total <= 0.0 {
        return Ok(0.0);
    }
    Ok(near.value() / total)
}

fn variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = crate::numerics::sum(values) / n;
    let mut acc = ExactSum::new();
    for &v in values {
        let d = v - mean;
        acc.add(d * d);
    }
    acc.value() / n
}
