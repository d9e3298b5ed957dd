//! The end-to-end pipeline: resolve the density source, run the epidemic,
//! and persist every artifact.

use super::config::{render_config, DensitySpec, ScenarioConfig};
use crate::error::{Error, Result};
use crate::io;
use crate::mfg::{expand_hmax, MfgEquilibrium, SpatialDensity};
use crate::seird::{simulate, summary_stats, DensityProfile, DensitySource, SummaryStats};
use crate::torus::PeriodicGrid;
use std::fs;
use std::path::{Path, PathBuf};

/// Paths of everything a run persists.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub resolved_config: PathBuf,
    /// The spatial density that actually drove the epidemic (x, mu_x).
    pub density_csv: PathBuf,
    /// Joint MFG density (x, h, mu), present for the mfg source.
    pub mfg_density_csv: Option<PathBuf>,
    /// MFG marginal at solver resolution, present for the mfg source.
    pub mfg_marginal_csv: Option<PathBuf>,
    pub trajectory_csv: PathBuf,
    /// One space-time matrix per compartment, S E I R D order.
    pub matrix_csvs: [PathBuf; 5],
    pub summary_txt: PathBuf,
}

impl RunArtifacts {
    fn at(dir: &Path, with_mfg: bool) -> Self {
        let compartments = ["S", "E", "I", "R", "D"];
        RunArtifacts {
            dir: dir.to_path_buf(),
            resolved_config: dir.join("config.resolved.cfg"),
            density_csv: dir.join("density.csv"),
            mfg_density_csv: with_mfg.then(|| dir.join("mfg_density.csv")),
            mfg_marginal_csv: with_mfg.then(|| dir.join("mfg_marginal.csv")),
            trajectory_csv: dir.join("trajectory.csv"),
            matrix_csvs: compartments.map(|c| dir.join(format!("matrix_{c}.csv"))),
            summary_txt: dir.join("summary.txt"),
        }
    }

    /// Locate the artifacts of a finished run and verify they exist.
    pub fn load(dir: &Path) -> Result<Self> {
        if dir.join("FAILED").exists() {
            return Err(Error::config(format!(
                "run at {} carries a FAILED marker",
                dir.display()
            )));
        }
        let with_mfg = dir.join("mfg_density.csv").exists();
        let artifacts = RunArtifacts::at(dir, with_mfg);
        for p in artifacts.required_paths() {
            if !p.exists() {
                return Err(Error::config(format!("missing artifact {}", p.display())));
            }
        }
        Ok(artifacts)
    }

    /// All paths that must exist for a complete run.
    pub fn required_paths(&self) -> Vec<&Path> {
        let mut out: Vec<&Path> = vec![
            &self.resolved_config,
            &self.density_csv,
            &self.trajectory_csv,
            &self.summary_txt,
        ];
        for m in &self.matrix_csvs {
            out.push(m);
        }
        if let Some(p) = &self.mfg_density_csv {
            out.push(p);
        }
        if let Some(p) = &self.mfg_marginal_csv {
            out.push(p);
        }
        out
    }
}

/// Run one scenario end to end, persisting all artifacts in the output
/// directory. On failure the partial artifacts are kept and a FAILED marker
/// file records the error.
pub fn run_pipeline(config: &ScenarioConfig) -> Result<RunArtifacts> {
    let dir = config.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let failed_marker = dir.join("FAILED");
    let _ = fs::remove_file(&failed_marker);

    match run_pipeline_inner(config, &dir) {
        Ok(artifacts) => Ok(artifacts),
        Err(err) => {
            let _ = fs::write(&failed_marker, format!("{err}\n"));
            Err(err)
        }
    }
}

fn run_pipeline_inner(config: &ScenarioConfig, dir: &Path) -> Result<RunArtifacts> {
    let with_mfg = matches!(config.density, DensitySpec::Mfg);
    let artifacts = RunArtifacts::at(dir, with_mfg);
    fs::write(&artifacts.resolved_config, render_config(config))
        .map_err(|e| Error::io(artifacts.resolved_config.display().to_string(), e))?;

    let grid = PeriodicGrid::new(config.n_x)?;
    let density = match &config.density {
        DensitySpec::Uniform => DensityProfile::uniform(grid.clone()),
        DensitySpec::Mfg => {
            let (_, equilibrium) = expand_hmax(&config.mfg)?;
            persist_mfg(&artifacts, &equilibrium)?;
            let marginal = equilibrium.marginal.resample(config.n_x)?;
            DensityProfile::from_values(grid.clone(), marginal.values, DensitySource::Mfg)?
        }
        DensitySpec::File(path) => {
            let (file_grid, values) = io::read_spatial_density(path)?;
            let native = SpatialDensity {
                grid: file_grid,
                values,
            };
            let resampled = native.resample(config.n_x)?;
            DensityProfile::from_values(grid.clone(), resampled.values, DensitySource::File)?
        }
    };

    io::write_spatial_density(
        &artifacts.density_csv,
        &SpatialDensity {
            grid: grid.clone(),
            values: density.values.clone(),
        },
    )?;

    let trajectory = simulate(&density, &config.epidemic)?;
    io::write_trajectory(&artifacts.trajectory_csv, &trajectory)?;
    io::write_matrix(&artifacts.matrix_csvs[0], &trajectory, |s| &s.s)?;
    io::write_matrix(&artifacts.matrix_csvs[1], &trajectory, |s| &s.e)?;
    io::write_matrix(&artifacts.matrix_csvs[2], &trajectory, |s| &s.i)?;
    io::write_matrix(&artifacts.matrix_csvs[3], &trajectory, |s| &s.r)?;
    io::write_matrix(&artifacts.matrix_csvs[4], &trajectory, |s| &s.d)?;

    let stats = summary_stats(&trajectory)?;
    fs::write(&artifacts.summary_txt, render_summary(config, &stats))
        .map_err(|e| Error::io(artifacts.summary_txt.display().to_string(), e))?;

    Ok(artifacts)
}

/// Persist the MFG solution fields next to the epidemic outputs.
fn persist_mfg(artifacts: &RunArtifacts, equilibrium: &MfgEquilibrium) -> Result<()> {
    if let Some(p) = &artifacts.mfg_density_csv {
        io::write_density_field(p, &equilibrium.density)?;
    }
    if let Some(p) = &artifacts.mfg_marginal_csv {
        io::write_spatial_density(p, &equilibrium.marginal)?;
    }
    Ok(())
}

/// Plain-text summary in `key = value` lines.
pub fn render_summary(config: &ScenarioConfig, stats: &SummaryStats) -> String {
    let mut out = String::new();
    out.push_str(&format!("scenario = {}\n", config.scenario_name));
    out.push_str(&format!("final_deaths = {}\n", stats.final_deaths));
    out.push_str(&format!("peak_infected = {}\n", stats.peak_infected));
    out.push_str(&format!(
        "peak_infected_time = {}\n",
        stats.peak_infected_time
    ));
    out.push_str(&format!(
        "argmax_final_deaths = {}\n",
        stats.argmax_final_deaths
    ));
    match stats.last_reached {
        Some((x, t)) => {
            out.push_str(&format!("last_reached_x = {x}\n"));
            out.push_str(&format!("last_reached_t = {t}\n"));
        }
        None => out.push_str("last_reached_x = none\n"),
    }
    out.push_str(&format!("first_passage_threshold = {}\n", stats.threshold));
    out
}

/// Parse a summary file back into key/value pairs.
pub fn parse_summary(path: &Path) -> Result<Vec<(String, String)>> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut out = Vec::new();
    for line in content.lines() {
        if let Some((k, v)) = line.split_once('=') {
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    Ok(out)
}
