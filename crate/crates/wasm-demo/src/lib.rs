//! Browser bindings for the interactive demo page.
//!
//! Three operations are exposed: solve the stationary MFG equilibrium on a
//! coarse grid, run the spatial epidemic on a density (uniform or the
//! equilibrium marginal), and sample the infection kernel. All plotting
//! happens in plain JS on the page; this module only moves numbers.

use mfg_seird::mfg::{mfg_fixed_point, AmenityProfile, MfgParams};
use mfg_seird::seird::{simulate, BetaMode, DensityProfile, DensitySource, EpidemicParams};
use mfg_seird::torus::{build_infection_kernel, PeriodicGrid};
use wasm_bindgen::prelude::*;

fn err_js(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Stationary equilibrium payload for the page.
#[wasm_bindgen]
pub struct EquilibriumResult {
    n_x: usize,
    n_h: usize,
    h_max: f64,
    iterations: usize,
    hjb_residual: f64,
    fp_residual: f64,
    amenity: Vec<f64>,
    marginal: Vec<f64>,
    density: Vec<f64>,
    investment: Vec<f64>,
}

#[wasm_bindgen]
impl EquilibriumResult {
    #[wasm_bindgen(getter)]
    pub fn n_x(&self) -> usize {
        self.n_x
    }

    #[wasm_bindgen(getter)]
    pub fn n_h(&self) -> usize {
        self.n_h
    }

    #[wasm_bindgen(getter)]
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    #[wasm_bindgen(getter)]
    pub fn hjb_residual(&self) -> f64 {
        self.hjb_residual
    }

    #[wasm_bindgen(getter)]
    pub fn fp_residual(&self) -> f64 {
        self.fp_residual
    }

    /// Amenity level per x node.
    pub fn amenity(&self) -> Vec<f64> {
        self.amenity.clone()
    }

    /// Spatial marginal of the stationary density.
    pub fn marginal(&self) -> Vec<f64> {
        self.marginal.clone()
    }

    /// Joint density, x-major: density[i * n_h + j].
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }

    /// Optimal investment rate, x-major like the density.
    pub fn investment(&self) -> Vec<f64> {
        self.investment.clone()
    }
}

/// Solve the stationary equilibrium on an n_x by n_h grid.
///
/// `amenity_kind` is "sin_peak" or "uniform"; `rho` is the discount rate.
#[wasm_bindgen]
pub fn solve_equilibrium(
    n_x: usize,
    n_h: usize,
    rho: f64,
    amenity_kind: &str,
    damping: f64,
) -> Result<EquilibriumResult, JsValue> {
    let amenity = match amenity_kind {
        "uniform" => AmenityProfile::Uniform,
        _ => AmenityProfile::SinPeak,
    };
    let params = MfgParams {
        n_x,
        n_h,
        rho,
        theta_damp: damping,
        // browser-friendly tolerances: visually indistinguishable from the
        // reference settings at these grid sizes
        tol_fixed_point: 1e-7,
        tol_inner: 1e-5,
        tol_fp: 1e-7,
        amenity,
        ..MfgParams::default()
    };
    let eq = mfg_fixed_point(&params).map_err(err_js)?;
    let grid = PeriodicGrid::new(n_x).map_err(err_js)?;
    let amenity_samples = params.amenity.sample(&grid).map_err(err_js)?;
    Ok(EquilibriumResult {
        n_x,
        n_h,
        h_max: params.h_max,
        iterations: eq.iterations,
        hjb_residual: eq.hjb_residual,
        fp_residual: eq.fp_residual,
        amenity: amenity_samples,
        marginal: eq.marginal.values,
        density: eq.density.values,
        investment: eq.policy.f_star,
    })
}

/// Epidemic run payload: space-time fields and aggregate series.
#[wasm_bindgen]
pub struct EpidemicResult {
    n_x: usize,
    times: Vec<f64>,
    infectious: Vec<f64>,
    deaths: Vec<f64>,
    agg_s: Vec<f64>,
    agg_e: Vec<f64>,
    agg_i: Vec<f64>,
    agg_r: Vec<f64>,
    agg_d: Vec<f64>,
    density: Vec<f64>,
}

#[wasm_bindgen]
impl EpidemicResult {
    #[wasm_bindgen(getter)]
    pub fn n_x(&self) -> usize {
        self.n_x
    }

    #[wasm_bindgen(getter)]
    pub fn n_rows(&self) -> usize {
        self.times.len()
    }

    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    /// Infectious field, row-major: infectious[row * n_x + k].
    pub fn infectious(&self) -> Vec<f64> {
        self.infectious.clone()
    }

    /// Death field, row-major like `infectious`.
    pub fn deaths(&self) -> Vec<f64> {
        self.deaths.clone()
    }

    pub fn agg_s(&self) -> Vec<f64> {
        self.agg_s.clone()
    }

    pub fn agg_e(&self) -> Vec<f64> {
        self.agg_e.clone()
    }

    pub fn agg_i(&self) -> Vec<f64> {
        self.agg_i.clone()
    }

    pub fn agg_r(&self) -> Vec<f64> {
        self.agg_r.clone()
    }

    pub fn agg_d(&self) -> Vec<f64> {
        self.agg_d.clone()
    }

    /// The density profile the run used.
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }
}

/// Run the spatial epidemic.
///
/// `marginal` is the spatial density to use (resampled to `n_x`); pass an
/// empty array for the uniform profile. `density_beta` switches the
/// transmission law between constant and density-dependent.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn run_epidemic(
    marginal: Vec<f64>,
    n_x: usize,
    density_beta: bool,
    chi: f64,
    i0: f64,
    r0: f64,
    center: f64,
    t_end: f64,
    dt: f64,
    snapshot_every: f64,
) -> Result<EpidemicResult, JsValue> {
    let grid = PeriodicGrid::new(n_x).map_err(err_js)?;
    let density = if marginal.is_empty() {
        DensityProfile::uniform(grid.clone())
    } else {
        let source = mfg_seird::mfg::SpatialDensity {
            grid: PeriodicGrid::new(marginal.len()).map_err(err_js)?,
            values: marginal,
        };
        let resampled = source.resample(n_x).map_err(err_js)?;
        DensityProfile::from_values(grid.clone(), resampled.values, DensitySource::Mfg)
            .map_err(err_js)?
    };
    let params = EpidemicParams {
        beta_mode: if density_beta {
            BetaMode::DensityDependent
        } else {
            BetaMode::Constant
        },
        chi,
        i0,
        r0,
        center,
        t_end,
        dt,
        snapshot_every,
        ..EpidemicParams::default()
    };
    let trajectory = simulate(&density, &params).map_err(err_js)?;
    let rows = trajectory.snapshots.len();
    let mut infectious = Vec::with_capacity(rows * n_x);
    let mut deaths = Vec::with_capacity(rows * n_x);
    for snap in &trajectory.snapshots {
        infectious.extend_from_slice(&snap.i);
        deaths.extend_from_slice(&snap.d);
    }
    Ok(EpidemicResult {
        n_x,
        times: trajectory.aggregates.iter().map(|a| a.t).collect(),
        infectious,
        deaths,
        agg_s: trajectory.aggregates.iter().map(|a| a.s).collect(),
        agg_e: trajectory.aggregates.iter().map(|a| a.e).collect(),
        agg_i: trajectory.aggregates.iter().map(|a| a.i).collect(),
        agg_r: trajectory.aggregates.iter().map(|a| a.r).collect(),
        agg_d: trajectory.aggregates.iter().map(|a| a.d).collect(),
        density: density.values,
    })
}

/// Sample the infection kernel on an n_x grid for the kernel explorer.
#[wasm_bindgen]
pub fn infection_kernel(n_x: usize, chi: f64) -> Result<Vec<f64>, JsValue> {
    let grid = PeriodicGrid::new(n_x).map_err(err_js)?;
    let kernel = build_infection_kernel(&grid, chi, 2.0 * grid.dx()).map_err(err_js)?;
    Ok(kernel.samples().to_vec())
}
