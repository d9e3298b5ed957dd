//! Declarative run configuration: a sectioned key = value file with every
//! omitted key taking the reference-table default, plus the echo writer
//! that records the fully resolved configuration next to the outputs.

use crate::error::{Error, Result};
use crate::mfg::{AmenityProfile, MfgParams};
use crate::seird::{BetaMode, EpidemicParams};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Where the epidemic's spatial density comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensitySpec {
    Uniform,
    Mfg,
    File(PathBuf),
}

/// A fully resolved scenario description.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario_name: String,
    pub density: DensitySpec,
    /// Epidemic grid resolution.
    pub n_x: usize,
    pub mfg: MfgParams,
    pub epidemic: EpidemicParams,
    pub output_dir: PathBuf,
    /// Amenity file path when the amenity came from disk (kept for echo).
    pub amenity_file: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            scenario_name: "custom".into(),
            density: DensitySpec::Uniform,
            n_x: 512,
            mfg: MfgParams::default(),
            epidemic: EpidemicParams::default(),
            output_dir: PathBuf::from("out"),
            amenity_file: None,
        }
    }
}

/// The three reference scenarios: uniform density with constant
/// transmission, MFG density with constant transmission, and MFG density
/// with density-dependent transmission.
pub fn builtin_scenario(name: &str, out_dir: &Path) -> Result<ScenarioConfig> {
    let mut config = ScenarioConfig {
        scenario_name: name.to_string(),
        output_dir: out_dir.to_path_buf(),
        ..ScenarioConfig::default()
    };
    match name {
        "fig3" => {
            config.density = DensitySpec::Uniform;
            config.epidemic.beta_mode = BetaMode::Constant;
        }
        "fig4" => {
            config.density = DensitySpec::Mfg;
            config.epidemic.beta_mode = BetaMode::Constant;
        }
        "fig5" => {
            config.density = DensitySpec::Mfg;
            config.epidemic.beta_mode = BetaMode::DensityDependent;
        }
        other => {
            return Err(Error::config(format!(
                "unknown scenario `{other}` (expected fig3, fig4, or fig5)"
            )));
        }
    }
    Ok(config)
}

/// Parse a scenario file, filling every omitted key with its default and
/// validating all invariants. The resolved config is what `run` executes
/// and what the echo file records.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig> {
    let content =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_config_str(&content, path)
}

fn parse_config_str(content: &str, origin: &Path) -> Result<ScenarioConfig> {
    let mut config = ScenarioConfig::default();
    let mut section = String::new();
    let mut density_path: Option<PathBuf> = None;
    let mut density_source = String::from("uniform");
    let mut amenity_kind = String::from("sin_peak");
    let mut amenity_path: Option<PathBuf> = None;

    for (ln, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| {
                Error::config(format!(
                    "{}:{}: unterminated section header",
                    origin.display(),
                    ln + 1
                ))
            })?;
            section = name.trim().to_string();
            if !matches!(section.as_str(), "density" | "mfg" | "epidemic" | "output") {
                return Err(Error::config(format!(
                    "{}:{}: unknown section [{section}]",
                    origin.display(),
                    ln + 1
                )));
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config(format!(
                "{}:{}: expected `key = value`, found `{line}`",
                origin.display(),
                ln + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        let ctx = |msg: String| Error::config(format!("{}:{}: {msg}", origin.display(), ln + 1));
        let num = |v: &str, key: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| ctx(format!("key `{key}` expects a number, found `{v}`")))
        };
        let int = |v: &str, key: &str| -> Result<usize> {
            v.parse::<usize>().map_err(|_| {
                ctx(format!(
                    "key `{key}` expects a positive integer, found `{v}`"
                ))
            })
        };

        match (section.as_str(), key) {
            ("density", "source") => density_source = value.to_string(),
            ("density", "path") => density_path = Some(PathBuf::from(value)),
            ("density", "n_x") => config.n_x = int(value, "density.n_x")?,

            ("mfg", "rho") => config.mfg.rho = num(value, "mfg.rho")?,
            ("mfg", "sigma_h") => config.mfg.sigma_h = num(value, "mfg.sigma_h")?,
            ("mfg", "eps_x") => config.mfg.eps_x = num(value, "mfg.eps_x")?,
            ("mfg", "alpha") => config.mfg.alpha = num(value, "mfg.alpha")?,
            ("mfg", "xi") => config.mfg.xi_spill = num(value, "mfg.xi")?,
            ("mfg", "gamma") => config.mfg.gamma = num(value, "mfg.gamma")?,
            ("mfg", "zeta") => config.mfg.zeta = num(value, "mfg.zeta")?,
            ("mfg", "p") => config.mfg.p_crra = num(value, "mfg.p")?,
            ("mfg", "v_max") => config.mfg.v_max = num(value, "mfg.v_max")?,
            ("mfg", "move_cost") => config.mfg.move_cost_coeff = num(value, "mfg.move_cost")?,
            ("mfg", "eta_eps1") => config.mfg.eta.eps1 = num(value, "mfg.eta_eps1")?,
            ("mfg", "eta_eps2") => config.mfg.eta.eps2 = num(value, "mfg.eta_eps2")?,
            ("mfg", "eta_eps3") => config.mfg.eta.eps3 = num(value, "mfg.eta_eps3")?,
            ("mfg", "amenity") => amenity_kind = value.to_string(),
            ("mfg", "amenity_path") => amenity_path = Some(PathBuf::from(value)),
            ("mfg", "h_max") => config.mfg.h_max = num(value, "mfg.h_max")?,
            ("mfg", "n_x") => config.mfg.n_x = int(value, "mfg.n_x")?,
            ("mfg", "n_h") => config.mfg.n_h = int(value, "mfg.n_h")?,
            ("mfg", "damping") => config.mfg.theta_damp = num(value, "mfg.damping")?,
            ("mfg", "tol_fixed_point") => {
                config.mfg.tol_fixed_point = num(value, "mfg.tol_fixed_point")?
            }
            ("mfg", "tol_inner") => config.mfg.tol_inner = num(value, "mfg.tol_inner")?,
            ("mfg", "tol_fp") => config.mfg.tol_fp = num(value, "mfg.tol_fp")?,
            ("mfg", "max_iters") => config.mfg.max_iters = int(value, "mfg.max_iters")?,

            ("epidemic", "theta") => config.epidemic.theta = num(value, "epidemic.theta")?,
            ("epidemic", "lambda") => config.epidemic.lambda_rec = num(value, "epidemic.lambda")?,
            ("epidemic", "delta") => config.epidemic.delta = num(value, "epidemic.delta")?,
            ("epidemic", "beta_mode") => {
                config.epidemic.beta_mode = match value {
                    "constant" => BetaMode::Constant,
                    "density" => BetaMode::DensityDependent,
                    other => {
                        return Err(ctx(format!(
                        "key `epidemic.beta_mode` expects `constant` or `density`, found `{other}`"
                    )))
                    }
                }
            }
            ("epidemic", "beta0") => config.epidemic.beta0 = num(value, "epidemic.beta0")?,
            ("epidemic", "chi") => config.epidemic.chi = num(value, "epidemic.chi")?,
            ("epidemic", "i0") => config.epidemic.i0 = num(value, "epidemic.i0")?,
            ("epidemic", "r0") => config.epidemic.r0 = num(value, "epidemic.r0")?,
            ("epidemic", "center") => config.epidemic.center = num(value, "epidemic.center")?,
            ("epidemic", "t_end") => config.epidemic.t_end = num(value, "epidemic.t_end")?,
            ("epidemic", "dt") => config.epidemic.dt = num(value, "epidemic.dt")?,
            ("epidemic", "snapshot_every") => {
                config.epidemic.snapshot_every = num(value, "epidemic.snapshot_every")?
            }

            ("output", "dir") => config.output_dir = PathBuf::from(value),
            ("output", "scenario_name") => config.scenario_name = value.to_string(),

            ("", k) => {
                return Err(ctx(format!(
                    "key `{k}` appears before any [section] header"
                )))
            }
            (s, k) => return Err(ctx(format!("unknown key `{k}` in section [{s}]"))),
        }
    }

    config.density = match density_source.as_str() {
        "uniform" => DensitySpec::Uniform,
        "mfg" => DensitySpec::Mfg,
        "file" => {
            let p = density_path.ok_or_else(|| {
                Error::config("density.source = file requires density.path".to_string())
            })?;
            let resolved = resolve_relative(origin, &p);
            if !resolved.exists() {
                return Err(Error::config(format!(
                    "density.path `{}` does not exist",
                    resolved.display()
                )));
            }
            DensitySpec::File(resolved)
        }
        other => {
            return Err(Error::config(format!(
                "key `density.source` expects uniform, mfg, or file, found `{other}`"
            )));
        }
    };

    config.mfg.amenity = match amenity_kind.as_str() {
        "sin_peak" => AmenityProfile::SinPeak,
        "uniform" => AmenityProfile::Uniform,
        "file" => {
            let p = amenity_path.clone().ok_or_else(|| {
                Error::config("mfg.amenity = file requires mfg.amenity_path".to_string())
            })?;
            let resolved = resolve_relative(origin, &p);
            let samples = crate::io::read_amenity(&resolved)?;
            if samples.len() != config.mfg.n_x {
                return Err(Error::config(format!(
                    "mfg.amenity_path `{}` holds {} samples but mfg.n_x = {}",
                    resolved.display(),
                    samples.len(),
                    config.mfg.n_x
                )));
            }
            config.amenity_file = Some(resolved);
            AmenityProfile::Samples(samples)
        }
        other => {
            return Err(Error::config(format!(
                "key `mfg.amenity` expects sin_peak, uniform, or file, found `{other}`"
            )));
        }
    };

    validate(&config)?;
    Ok(config)
}

/// Interpret a path in a config file relative to the file's directory.
fn resolve_relative(origin: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        origin.parent().unwrap_or(Path::new(".")).join(p)
    }
}

fn validate(config: &ScenarioConfig) -> Result<()> {
    if config.n_x < 8 {
        return Err(Error::config(format!(
            "density.n_x = {} below the minimum of 8",
            config.n_x
        )));
    }
    config.mfg.validate()?;
    config.epidemic.validate()?;
    if config.scenario_name.is_empty() {
        return Err(Error::config("output.scenario_name must not be empty"));
    }
    Ok(())
}

/// Render the fully resolved configuration (every key explicit).
pub fn render_config(config: &ScenarioConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[density]");
    let _ = writeln!(
        out,
        "source = {}",
        match &config.density {
            DensitySpec::Uniform => "uniform",
            DensitySpec::Mfg => "mfg",
            DensitySpec::File(_) => "file",
        }
    );
    if let DensitySpec::File(p) = &config.density {
        let _ = writeln!(out, "path = {}", p.display());
    }
    let _ = writeln!(out, "n_x = {}", config.n_x);
    let m = &config.mfg;
    let _ = writeln!(out, "\n[mfg]");
    let _ = writeln!(out, "rho = {}", m.rho);
    let _ = writeln!(out, "sigma_h = {}", m.sigma_h);
    let _ = writeln!(out, "eps_x = {}", m.eps_x);
    let _ = writeln!(out, "alpha = {}", m.alpha);
    let _ = writeln!(out, "xi = {}", m.xi_spill);
    let _ = writeln!(out, "gamma = {}", m.gamma);
    let _ = writeln!(out, "zeta = {}", m.zeta);
    let _ = writeln!(out, "p = {}", m.p_crra);
    let _ = writeln!(out, "v_max = {}", m.v_max);
    let _ = writeln!(out, "move_cost = {}", m.move_cost_coeff);
    let _ = writeln!(out, "eta_eps1 = {}", m.eta.eps1);
    let _ = writeln!(out, "eta_eps2 = {}", m.eta.eps2);
    let _ = writeln!(out, "eta_eps3 = {}", m.eta.eps3);
    match (&m.amenity, &config.amenity_file) {
        (AmenityProfile::SinPeak, _) => {
            let _ = writeln!(out, "amenity = sin_peak");
        }
        (AmenityProfile::Uniform, _) => {
            let _ = writeln!(out, "amenity = uniform");
        }
        (AmenityProfile::Samples(_), Some(p)) => {
            let _ = writeln!(out, "amenity = file");
            let _ = writeln!(out, "amenity_path = {}", p.display());
        }
        (AmenityProfile::Samples(_), None) => {
            // programmatic samples cannot be echoed to a file reference
            let _ = writeln!(out, "amenity = sin_peak");
        }
    }
    let _ = writeln!(out, "h_max = {}", m.h_max);
    let _ = writeln!(out, "n_x = {}", m.n_x);
    let _ = writeln!(out, "n_h = {}", m.n_h);
    let _ = writeln!(out, "damping = {}", m.theta_damp);
    let _ = writeln!(out, "tol_fixed_point = {}", m.tol_fixed_point);
    let _ = writeln!(out, "tol_inner = {}", m.tol_inner);
    let _ = writeln!(out, "tol_fp = {}", m.tol_fp);
    let _ = writeln!(out, "max_iters = {}", m.max_iters);
    let e = &config.epidemic;
    let _ = writeln!(out, "\n[epidemic]");
    let _ = writeln!(out, "theta = {}", e.theta);
    let _ = writeln!(out, "lambda = {}", e.lambda_rec);
    let _ = writeln!(out, "delta = {}", e.delta);
    let _ = writeln!(
        out,
        "beta_mode = {}",
        match e.beta_mode {
            BetaMode::Constant => "constant",
            BetaMode::DensityDependent => "density",
        }
    );
    let _ = writeln!(out, "beta0 = {}", e.beta0);
    let _ = writeln!(out, "chi = {}", e.chi);
    let _ = writeln!(out, "i0 = {}", e.i0);
    let _ = writeln!(out, "r0 = {}", e.r0);
    let _ = writeln!(out, "center = {}", e.center);
    let _ = writeln!(out, "t_end = {}", e.t_end);
    let _ = writeln!(out, "dt = {}", e.dt);
    let _ = writeln!(out, "snapshot_every = {}", e.snapshot_every);
    let _ = writeln!(out, "\n[output]");
    let _ = writeln!(out, "dir = {}", config.output_dir.display());
    let _ = writeln!(out, "scenario_name = {}", config.scenario_name);
    out
}
