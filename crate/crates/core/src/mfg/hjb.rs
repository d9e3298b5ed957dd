//! Stationary HJB solver: policy iteration (Howard's algorithm) over the
//! monotone upwind scheme, with a damped value-iteration fallback.
//!
//! Each sweep improves the policy through the closed-form maximizers and
//! evaluates it by one sparse linear solve of (rho I - G_pi) V = r_pi. The
//! loop exits when the independently recomputed Bellman residual (the
//! discrete equation with maximized Hamiltonians) drops below the requested
//! sup-norm tolerance.

use super::fields::{DensityField, PolicyField, ValueField};
use super::interaction::interaction_f;
use super::operator::MfgOperator;
use super::params::MfgParams;
use crate::error::{Error, Result};
use crate::numerics::{bicgstab, sup_norm};
use crate::torus::{eta_profile, PeriodicGrid, RectGrid};

const MAX_HOWARD: usize = 200;

/// Convergence report of one HJB solve.
#[derive(Clone, Debug)]
pub struct HjbDiagnostics {
    pub howard_iters: usize,
    pub residual: f64,
    pub fallback_used: bool,
}

/// Solve the stationary HJB at a frozen population density.
///
/// Builds the interaction average from `density`, runs policy iteration from
/// `v_init` (zero when absent), and returns the value function, the
/// maximizing controls, and diagnostics. The returned residual is the
/// sup norm of the discrete equation, recomputed nodewise.
pub fn hjb_solve(
    density: &DensityField,
    params: &MfgParams,
    v_init: Option<&ValueField>,
) -> Result<(ValueField, PolicyField, HjbDiagnostics)> {
    params.validate()?;
    let grid = density.grid.clone();
    let eta = eta_profile(
        &grid.spatial,
        params.eta.eps1,
        params.eta.eps2,
        params.eta.eps3,
    )?;
    let amenity = params.amenity.sample(&grid.spatial)?;
    let interaction = interaction_f(density, &eta)?;
    let op = MfgOperator::new(grid.clone(), params, amenity, interaction)?;
    let mut v_sys = match v_init {
        Some(v) => extract_system(&op, &v.values),
        None => vec![0.0; op.n_sys()],
    };
    let diag = solve_in_place(&op, &mut v_sys, params.tol_inner)?;
    let policy = op.improve_policy(&v_sys);
    Ok((embed_value(&op, &v_sys), policy, diag))
}

/// Build a value field on the full grid from the system vector (Dirichlet
/// row included as zeros).
pub(crate) fn embed_value(op: &MfgOperator, v_sys: &[f64]) -> ValueField {
    let grid = op.grid.clone();
    let mut values = vec![0.0; grid.len()];
    for i in 0..grid.n_x() {
        for j in 1..grid.n_h() {
            values[grid.idx(i, j)] = v_sys[op.sys(i, j)];
        }
    }
    ValueField { grid, values }
}

pub(crate) fn extract_system(op: &MfgOperator, full: &[f64]) -> Vec<f64> {
    let grid = &op.grid;
    let mut out = vec![0.0; op.n_sys()];
    for i in 0..grid.n_x() {
        for j in 1..grid.n_h() {
            out[op.sys(i, j)] = full[grid.idx(i, j)];
        }
    }
    out
}

/// Policy iteration on the system vector, in place.
pub(crate) fn solve_in_place(
    op: &MfgOperator,
    v_sys: &mut [f64],
    tol: f64,
) -> Result<HjbDiagnostics> {
    let n = op.n_sys();
    let lin_tol = (tol * 1e-2).max(1e-13);
    for iter in 0..MAX_HOWARD {
        let residual = sup_norm(&op.bellman_residual(v_sys));
        if !residual.is_finite() {
            return Err(Error::solver(format!(
                "HJB iterate became non-finite at Howard step {iter}"
            )));
        }
        if residual <= tol {
            return Ok(HjbDiagnostics {
                howard_iters: iter,
                residual,
                fallback_used: false,
            });
        }
        let policy = op.improve_policy(v_sys);
        let (a, rhs) = op.assemble_hjb(&policy);
        let out = bicgstab(&a, &rhs, v_sys, lin_tol, 40 * n);
        if !out.converged {
            // policy evaluation failed; fall back to explicit marching
            return value_iteration_fallback(op, v_sys, tol);
        }
    }
    // Howard exhausted without meeting the tolerance
    value_iteration_fallback(op, v_sys, tol)
}

/// Damped pseudo-time marching on the Bellman operator. Unconditionally
/// stable for steps below the inverse of the total rate bound; slow, and
/// only used when policy iteration fails.
fn value_iteration_fallback(
    op: &MfgOperator,
    v_sys: &mut [f64],
    tol: f64,
) -> Result<HjbDiagnostics> {
    let grid = &op.grid;
    let params = &op.params;
    // static bound on the total outflow rate of any node
    let mut max_rate: f64 = 0.0;
    for i in 0..grid.n_x() {
        for j in 1..grid.n_h() {
            let up = op.chain_rates(i, j, params.v_max, 1.0);
            let dn = op.chain_rates(i, j, -params.v_max, 0.0);
            max_rate = max_rate
                .max(up.xp + up.xm + up.hp + up.hm)
                .max(dn.xp + dn.xm + dn.hp + dn.hm);
        }
    }
    let tau = 0.9 / (params.rho + max_rate);
    let max_steps = 2_000_000usize;
    for step in 0..max_steps {
        let res = op.bellman_residual(v_sys);
        let norm = sup_norm(&res);
        if !norm.is_finite() {
            return Err(Error::solver(
                "HJB value iteration produced a non-finite residual",
            ));
        }
        if norm <= tol {
            return Ok(HjbDiagnostics {
                howard_iters: step,
                residual: norm,
                fallback_used: true,
            });
        }
        for (v, r) in v_sys.iter_mut().zip(res.iter()) {
            *v -= tau * r;
        }
    }
    let residual = sup_norm(&op.bellman_residual(v_sys));
    Err(Error::solver(format!(
        "HJB did not converge: residual {residual} after fallback marching"
    )))
}

/// Convenience context for tests and the fixed-point driver: grid, eta,
/// amenity samples.
pub(crate) fn build_grid(params: &MfgParams) -> Result<RectGrid> {
    let spatial = PeriodicGrid::new(params.n_x)?;
    RectGrid::new(spatial, params.n_h, params.h_max)
}
