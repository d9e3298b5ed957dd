//! Parameters of the stationary mean field game.

use crate::error::{Error, Result};
use crate::torus::{validate_eta_params, PeriodicGrid};

/// Interaction weight parameters: plateau radius, far-field floor, and
/// shoulder width of the piecewise-linear profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaParams {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
}

impl Default for EtaParams {
    fn default() -> Self {
        // eps1 is the interaction radius R; the floor keeps the interaction
        // average well defined everywhere.
        EtaParams {
            eps1: 0.3,
            eps2: 1e-3,
            eps3: 0.1,
        }
    }
}

/// Local amenity level across the torus.
#[derive(Clone, Debug, PartialEq)]
pub enum AmenityProfile {
    /// A(x) = sin(2 pi (x - 1/4)) / 2 + 1: one peak at x = 0.5.
    SinPeak,
    /// A(x) = 1.
    Uniform,
    /// Explicit nodal samples (must match the grid and stay positive).
    Samples(Vec<f64>),
}

/// The single-peak default amenity level at position x.
pub fn amenity_sin_peak(x: f64) -> f64 {
    0.5 * (2.0 * std::f64::consts::PI * (x - 0.25)).sin() + 1.0
}

impl AmenityProfile {
    /// Nodal samples on `grid`; errors if any level is not strictly positive.
    pub fn sample(&self, grid: &PeriodicGrid) -> Result<Vec<f64>> {
        let values: Vec<f64> = match self {
            AmenityProfile::SinPeak => (0..grid.n_x())
                .map(|i| amenity_sin_peak(grid.node(i)))
                .collect(),
            AmenityProfile::Uniform => vec![1.0; grid.n_x()],
            AmenityProfile::Samples(v) => {
                if v.len() != grid.n_x() {
                    return Err(Error::config(format!(
                        "amenity sample count {} does not match n_x = {}",
                        v.len(),
                        grid.n_x()
                    )));
                }
                v.clone()
            }
        };
        for (i, &a) in values.iter().enumerate() {
            if !(a > 0.0) {
                return Err(Error::config(format!(
                    "amenity must be strictly positive; A(x_{i}) = {a}"
                )));
            }
        }
        Ok(values)
    }
}

/// Full parameter set of the stationary MFG solver.
#[derive(Clone, Debug, PartialEq)]
pub struct MfgParams {
    /// Discount rate.
    pub rho: f64,
    /// Multiplicative noise intensity on capital.
    pub sigma_h: f64,
    /// Spatial noise intensity.
    pub eps_x: f64,
    /// Income exponent.
    pub alpha: f64,
    /// Spillover exponent in the capital drift.
    pub xi_spill: f64,
    /// Consumption-spillover weight.
    pub gamma: f64,
    /// Capital depreciation rate.
    pub zeta: f64,
    /// Utility curvature.
    pub p_crra: f64,
    /// Velocity bound of the movement control set.
    pub v_max: f64,
    /// Coefficient of the quadratic movement cost.
    pub move_cost_coeff: f64,
    pub eta: EtaParams,
    pub amenity: AmenityProfile,
    /// Capital truncation bound.
    pub h_max: f64,
    pub n_x: usize,
    pub n_h: usize,
    /// Damping of the fixed-point density update, in (0, 1].
    pub theta_damp: f64,
    /// L1 tolerance on the damped density update.
    pub tol_fixed_point: f64,
    /// Sup-norm tolerance on the HJB residual.
    pub tol_inner: f64,
    /// Sup-norm tolerance on the stationary Fokker-Planck residual
    /// (after normalization).
    pub tol_fp: f64,
    /// Bound on fixed-point iterations.
    pub max_iters: usize,
}

impl Default for MfgParams {
    fn default() -> Self {
        MfgParams {
            rho: 0.05,
            sigma_h: 0.7,
            eps_x: 0.5,
            alpha: 0.5,
            xi_spill: 0.1,
            gamma: 0.15,
            zeta: 0.15,
            p_crra: 0.1,
            v_max: 1.0,
            move_cost_coeff: 1.0,
            eta: EtaParams::default(),
            amenity: AmenityProfile::SinPeak,
            h_max: 15.0,
            n_x: 64,
            n_h: 64,
            theta_damp: 0.5,
            tol_fixed_point: 1e-9,
            tol_inner: 1e-6,
            tol_fp: 1e-8,
            max_iters: 500,
        }
    }
}

impl MfgParams {
    /// Check every parameter invariant. Reported before any solve.
    pub fn validate(&self) -> Result<()> {
        // The income exponent condition is alpha > 1/2 with alpha + xi < 1;
        // the reference parameter table sits exactly on the boundary
        // alpha = 1/2, so the boundary is admitted.
        if !(self.alpha >= 0.5) {
            return Err(Error::config(format!(
                "mfg.alpha = {} violates alpha >= 1/2",
                self.alpha
            )));
        }
        if !(self.xi_spill > 0.0 && self.xi_spill < 1.0) {
            return Err(Error::config(format!(
                "mfg.xi = {} violates 0 < xi < 1",
                self.xi_spill
            )));
        }
        if !(self.alpha + self.xi_spill < 1.0) {
            return Err(Error::config(format!(
                "mfg.alpha + mfg.xi = {} violates alpha + xi < 1",
                self.alpha + self.xi_spill
            )));
        }
        for (name, v) in [
            ("mfg.rho", self.rho),
            ("mfg.zeta", self.zeta),
            ("mfg.sigma_h", self.sigma_h),
            ("mfg.eps_x", self.eps_x),
            ("mfg.v_max", self.v_max),
            ("mfg.move_cost", self.move_cost_coeff),
            ("mfg.h_max", self.h_max),
            ("mfg.tol_fixed_point", self.tol_fixed_point),
            ("mfg.tol_inner", self.tol_inner),
            ("mfg.tol_fp", self.tol_fp),
        ] {
            if !(v > 0.0) {
                return Err(Error::config(format!("{name} = {v} must be positive")));
            }
        }
        for (name, v) in [("mfg.gamma", self.gamma), ("mfg.p", self.p_crra)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::config(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        if !(self.theta_damp > 0.0 && self.theta_damp <= 1.0) {
            return Err(Error::config(format!(
                "mfg.damping = {} must lie in (0, 1]",
                self.theta_damp
            )));
        }
        if self.n_x < 8 || self.n_h < 8 {
            return Err(Error::config(format!(
                "mfg grid {}x{} below the minimum of 8 nodes per axis",
                self.n_x, self.n_h
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::config("mfg.max_iters must be at least 1"));
        }
        validate_eta_params(self.eta.eps1, self.eta.eps2, self.eta.eps3)?;
        if let AmenityProfile::Samples(v) = &self.amenity {
            if v.len() != self.n_x {
                return Err(Error::config(format!(
                    "amenity sample count {} does not match mfg.n_x = {}",
                    v.len(),
                    self.n_x
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        MfgParams::default().validate().unwrap();
    }

    #[test]
    fn amenity_reference_values() {
        assert!((amenity_sin_peak(0.25) - 1.0).abs() < 1e-15);
        assert!((amenity_sin_peak(0.5) - 1.5).abs() < 1e-15);
        assert!((amenity_sin_peak(0.0) - 0.5).abs() < 1e-15);
        // global extrema of the sampled profile
        let grid = PeriodicGrid::new(512).unwrap();
        let a = AmenityProfile::SinPeak.sample(&grid).unwrap();
        let max_i = crate::numerics::argmax(&a);
        assert_eq!(grid.node(max_i), 0.5);
        assert!(a.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn exponent_constraints_enforced() {
        let mut p = MfgParams {
            alpha: 0.45,
            ..MfgParams::default()
        };
        assert!(p.validate().is_err());
        p.alpha = 0.95;
        p.xi_spill = 0.1;
        assert!(p.validate().is_err()); // alpha + xi >= 1
        p.alpha = 0.5;
        p.xi_spill = 0.1;
        assert!(p.validate().is_ok());
    }

    #[test]
    fn eta_and_damping_checked() {
        let mut p = MfgParams::default();
        p.eta.eps2 = 0.0;
        assert!(p.validate().is_err());
        let p = MfgParams {
            theta_damp: 0.0,
            ..MfgParams::default()
        };
        assert!(p.validate().is_err());
    }
}
