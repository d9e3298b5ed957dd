//! Command-line front end: solve the MFG, run scenarios, compare runs.

use mfg_seird::error::Error;
use mfg_seird::io;
use mfg_seird::mfg::expand_hmax;
use mfg_seird::scenario::{
    builtin_scenario, compare_runs, parse_config, parse_summary, render_config, run_pipeline,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "\
mfg-seird: stationary MFG equilibrium + spatial SEIRD epidemic

USAGE:
    mfg-seird solve-mfg --config <path>
    mfg-seird run --config <path>
    mfg-seird run --scenario fig3|fig4|fig5 --out <dir>
    mfg-seird compare <dirA> <dirB>

Exit codes: 0 success, 1 configuration error, 2 solver failure.
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_config() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn dispatch(args: &[String]) -> Result<(), Error> {
    let mut it = args.iter();
    match it.next().map(String::as_str) {
        Some("solve-mfg") => {
            let config_path = flag_value(args, "--config")?;
            solve_mfg(Path::new(&config_path))
        }
        Some("run") => {
            if let Ok(config_path) = flag_value(args, "--config") {
                let config = parse_config(Path::new(&config_path))?;
                run_and_report(&config)
            } else {
                let scenario = flag_value(args, "--scenario")?;
                let out = flag_value(args, "--out")?;
                let config = builtin_scenario(&scenario, Path::new(&out))?;
                run_and_report(&config)
            }
        }
        Some("compare") => {
            let rest: Vec<&String> = it.collect();
            let [a, b] = rest.as_slice() else {
                return Err(Error::config(format!(
                    "compare expects two run directories\n\n{USAGE}"
                )));
            };
            let report = compare_runs(Path::new(a), Path::new(b))?;
            print!("{report}");
            Ok(())
        }
        Some("--help") | Some("-h") | Some("help") => {
            print!("{USAGE}");
            Ok(())
        }
        other => Err(Error::config(format!(
            "unknown command {other:?}\n\n{USAGE}"
        ))),
    }
}

fn flag_value(args: &[String], flag: &str) -> Result<String, Error> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == flag {
            return it
                .next()
                .cloned()
                .ok_or_else(|| Error::config(format!("{flag} expects a value\n\n{USAGE}")));
        }
    }
    Err(Error::config(format!("missing {flag}\n\n{USAGE}")))
}

/// Solve the stationary MFG of a config and persist its fields without
/// running the epidemic.
fn solve_mfg(config_path: &Path) -> Result<(), Error> {
    let config = parse_config(config_path)?;
    let dir: PathBuf = config.output_dir.clone();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    std::fs::write(dir.join("config.resolved.cfg"), render_config(&config))
        .map_err(|e| Error::io(dir.display().to_string(), e))?;
    let (resolved, equilibrium) = expand_hmax(&config.mfg)?;
    io::write_density_field(&dir.join("mfg_density.csv"), &equilibrium.density)?;
    io::write_spatial_density(&dir.join("mfg_marginal.csv"), &equilibrium.marginal)?;
    let resampled = equilibrium.marginal.resample(config.n_x)?;
    io::write_spatial_density(&dir.join("density.csv"), &resampled)?;
    println!(
        "mfg solved: {} iterations, h_max = {}, hjb residual {:.3e}, fp residual {:.3e}",
        equilibrium.iterations, resolved.h_max, equilibrium.hjb_residual, equilibrium.fp_residual
    );
    println!("artifacts in {}", dir.display());
    Ok(())
}

fn run_and_report(config: &mfg_seird::scenario::ScenarioConfig) -> Result<(), Error> {
    let artifacts = run_pipeline(config)?;
    println!("scenario `{}` finished", config.scenario_name);
    for (key, value) in parse_summary(&artifacts.summary_txt)? {
        println!("  {key} = {value}");
    }
    println!("artifacts in {}", artifacts.dir.display());
    Ok(())
}
