//! Stationary Fokker-Planck solver: inverse-power iteration on the
//! transposed chain generator.
//!
//! The stationary density is the nonnegative null vector of G^T (the exact
//! transpose of the frozen-policy transport-diffusion generator). It is
//! found by implicit Euler steps (I - dt G^T) mu_next = mu, whose matrix is
//! an M-matrix for every dt > 0, so the iterates stay nonnegative and the
//! plain sum is conserved up to rounding. The pseudo-step is escalated
//! geometrically; each step contracts the non-stationary components by
//! 1 / (1 + dt gap).

use super::fields::{DensityField, PolicyField};
use super::operator::MfgOperator;
use crate::error::{Error, Result};
use crate::numerics::sparse::{Csr, CsrBuilder};
use crate::numerics::{bicgstab, sup_norm};

const MAX_POWER_STEPS: usize = 120;
const DT_INITIAL: f64 = 10.0;
const DT_MAX: f64 = 1e4;

/// Convergence report of one stationary solve.
#[derive(Clone, Debug)]
pub struct FpDiagnostics {
    pub power_steps: usize,
    pub residual: f64,
}

/// Solve the stationary Fokker-Planck equation for the frozen policy.
///
/// Returns the unit-mass density on the full grid (the h = 0 row is zero by
/// the no-flux closure) and the sup norm of G^T mu at the normalized
/// solution. `warm` seeds the iteration, typically with the previous
/// fixed-point density.
pub fn fp_solve(
    op: &MfgOperator,
    policy: &PolicyField,
    warm: Option<&DensityField>,
) -> Result<(DensityField, FpDiagnostics)> {
    let gt = op.assemble_fp(policy);
    let n = op.n_sys();

    let mut mu = match warm {
        Some(field) => {
            let mut v = super::hjb::extract_system(op, &field.values);
            for e in v.iter_mut() {
                *e = e.max(0.0);
            }
            v
        }
        None => vec![1.0; n],
    };
    quad_normalize(op, &mut mu)?;

    let mut dt = DT_INITIAL;
    let mut work = vec![0.0; n];
    let mut steps = 0;
    let mut residual = fp_residual_sys(&gt, &mu, &mut work);
    while residual > op.params.tol_fp {
        if steps >= MAX_POWER_STEPS {
            return Err(Error::solver(format!(
                "stationary density iteration stalled: residual {residual} after {steps} steps \
                 (non-unique stationary density or tolerance too tight)"
            )));
        }
        let system = shifted_system(&gt, dt);
        let rhs = mu.clone();
        let lin_tol = (0.02 * op.params.tol_fp * dt).clamp(1e-14, 1e-3);
        let out = bicgstab(&system, &rhs, &mut mu, lin_tol, 60 * n);
        if !out.converged || mu.iter().any(|v| !v.is_finite()) {
            // retreat to a better conditioned step
            dt = (dt / 10.0).max(1.0);
            mu = rhs;
            steps += 1;
            continue;
        }
        quad_normalize(op, &mut mu)?;
        residual = fp_residual_sys(&gt, &mu, &mut work);
        dt = (dt * 10.0).min(DT_MAX);
        steps += 1;
    }

    // nonnegativity within the explicit-scheme tolerance, then clip
    let min = crate::numerics::min_value(&mu);
    if min < -1e-12 {
        return Err(Error::solver(format!(
            "stationary density has negative entries down to {min}"
        )));
    }
    for v in mu.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    quad_normalize(op, &mut mu)?;
    let residual = fp_residual_sys(&gt, &mu, &mut work);

    let grid = op.grid.clone();
    let mut values = vec![0.0; grid.len()];
    for i in 0..grid.n_x() {
        for j in 1..grid.n_h() {
            values[grid.idx(i, j)] = mu[op.sys(i, j)];
        }
    }
    let density = DensityField { grid, values };
    Ok((
        density,
        FpDiagnostics {
            power_steps: steps,
            residual,
        },
    ))
}

/// Sup norm of G^T mu for a system-indexed density.
pub fn fp_residual_sys(gt: &Csr, mu: &[f64], work: &mut [f64]) -> f64 {
    gt.mul(mu, work);
    sup_norm(work)
}

/// Residual of a full-grid density against the operator's stationary
/// equation (assembles G^T afresh).
pub fn fp_residual(op: &MfgOperator, policy: &PolicyField, density: &DensityField) -> f64 {
    let gt = op.assemble_fp(policy);
    let mu = super::hjb::extract_system(op, &density.values);
    let mut work = vec![0.0; mu.len()];
    fp_residual_sys(&gt, &mu, &mut work)
}

/// I - dt G^T in the same stencil layout as G^T.
fn shifted_system(gt: &Csr, dt: f64) -> Csr {
    let n = gt.n();
    let mut builder = CsrBuilder::new(n);
    for row in 0..n {
        for (col, v) in gt.row_entries(row) {
            let value = if col == row { 1.0 - dt * v } else { -dt * v };
            builder.push(col, value);
        }
        builder.finish_row();
    }
    builder.build()
}

/// Normalize to unit quadrature mass over the full grid (the h = 0 row is
/// zero and carries half weight, contributing nothing).
fn quad_normalize(op: &MfgOperator, mu: &mut [f64]) -> Result<()> {
    let grid = &op.grid;
    let mut acc = crate::numerics::ExactSum::new();
    for i in 0..grid.n_x() {
        for j in 1..grid.n_h() {
            acc.add(mu[op.sys(i, j)] * grid.h_weight(j));
        }
    }
    let mass = acc.value() * grid.dx() * grid.dh();
    if !(mass > 0.0) {
        return Err(Error::solver(format!(
            "stationary density lost its mass (quadrature mass {mass})"
        )));
    }
    for v in mu.iter_mut() {
        *v /= mass;
    }
    Ok(())
}
