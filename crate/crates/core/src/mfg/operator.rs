//! Monotone upwind discretization of the stationary MFG system on
//! S^1 x [0, h_max], shared by the HJB and Fokker-Planck solvers.
//!
//! The scheme follows the Markov-chain (Kushner-Dupuis) construction: at
//! every interior node the controlled diffusion is replaced by a chain whose
//! transition rates are
//!
//! ```text
//! x+ : eps^2/(2 dx^2) + max(v, 0)/dx      x- : eps^2/(2 dx^2) + max(-v, 0)/dx
//! h+ : D_j/dh^2 + max(b, 0)/dh           h- : D_j/dh^2 + max(-b, 0)/dh
//! ```
//!
//! with D_j = sigma_h^2 h_j^2 / 2 and capital drift b = f h^alpha F^xi -
//! zeta h. First-order terms are upwinded by drift sign (forward difference
//! for positive drift, backward for negative), second-order terms are
//! centered; all off-diagonal coefficients stay nonnegative, which keeps the
//! assembled systems M-matrices.
//!
//! Boundary closures:
//!
//! * h = 0 carries the Dirichlet value V = 0. The value system therefore
//!   excludes row 0 and lets the chain absorb into the zero-value state,
//!   while the density system reflects at the face between rows 0 and 1
//!   (no-flux), which keeps total mass structural. The density row at h = 0
//!   is identically zero.
//! * h = h_max reflects: the outward components (up-diffusion and any
//!   positive drift) are suppressed, so the chain is capped. This keeps the
//!   scheme monotone even when the optimal drift points outward at the
//!   truncation boundary.
//! * x is periodic.
//!
//! The density operator is the exact transpose of the value-side chain
//! generator on the interior: both assemblies read the same `chain_rates`,
//! the Fokker-Planck matrix just stores each rate at the transposed
//! position (grouped by destination node in fixed stencil order, so products
//! with it stay rotation-equivariant at the bit level).

use super::fields::PolicyField;
use super::hamiltonian::{optimal_f_inner, H1Coeffs};
use super::params::MfgParams;
use crate::error::{Error, Result};
use crate::numerics::sparse::{Csr, CsrBuilder};
use crate::torus::RectGrid;

/// Outgoing chain rates of one node under a given control pair.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChainRates {
    pub xp: f64,
    pub xm: f64,
    pub hp: f64,
    pub hm: f64,
}

/// Assembly context: grid, parameters, amenity samples and the interaction
/// average, plus the precomputed coefficient tables.
pub struct MfgOperator {
    pub grid: RectGrid,
    pub params: MfgParams,
    /// Amenity level per x node.
    pub amenity: Vec<f64>,
    /// Interaction average F per x node.
    pub interaction: Vec<f64>,
    coeffs: H1Coeffs,
    /// h_j^alpha per capital row.
    h_alpha: Vec<f64>,
    /// F_i^xi per x node.
    f_xi: Vec<f64>,
    /// A_i^(1-p) per x node.
    a_pow: Vec<f64>,
    /// h_j^(alpha m) per capital row.
    h_util: Vec<f64>,
    /// F_i^(gamma (1-p)) per x node.
    f_util: Vec<f64>,
    /// sigma^2 h_j^2 / (2 dh^2) per capital row.
    diff_h: Vec<f64>,
    /// eps^2 / (2 dx^2).
    diff_x: f64,
}

impl MfgOperator {
    pub fn new(
        grid: RectGrid,
        params: &MfgParams,
        amenity: Vec<f64>,
        interaction: Vec<f64>,
    ) -> Result<Self> {
        if amenity.len() != grid.n_x() || interaction.len() != grid.n_x() {
            return Err(Error::config(
                "amenity/interaction sample count does not match the grid",
            ));
        }
        let coeffs = H1Coeffs {
            alpha: params.alpha,
            xi_spill: params.xi_spill,
            gamma: params.gamma,
            zeta: params.zeta,
            p_crra: params.p_crra,
        };
        let m = coeffs.m();
        let dh = grid.dh();
        let h_alpha = (0..grid.n_h())
            .map(|j| grid.h_node(j).powf(params.alpha))
            .collect();
        let h_util = (0..grid.n_h())
            .map(|j| grid.h_node(j).powf(params.alpha * m))
            .collect();
        let f_xi = interaction
            .iter()
            .map(|f| f.powf(params.xi_spill))
            .collect();
        let f_util = interaction
            .iter()
            .map(|f| f.powf(params.gamma * (1.0 - params.p_crra)))
            .collect();
        let a_pow = amenity
            .iter()
            .map(|a| a.powf(1.0 - params.p_crra))
            .collect();
        let diff_h = (0..grid.n_h())
            .map(|j| {
                let h = grid.h_node(j);
                0.5 * params.sigma_h * params.sigma_h * h * h / (dh * dh)
            })
            .collect();
        let diff_x = 0.5 * params.eps_x * params.eps_x / (grid.dx() * grid.dx());
        Ok(MfgOperator {
            grid,
            params: params.clone(),
            amenity,
            interaction,
            coeffs,
            h_alpha,
            f_xi,
            a_pow,
            h_util,
            f_util,
            diff_h,
            diff_x,
        })
    }

    /// Number of unknowns: all nodes above the Dirichlet row h = 0.
    pub fn n_sys(&self) -> usize {
        self.grid.n_x() * (self.grid.n_h() - 1)
    }

    /// System index of node (i, j), j >= 1.
    pub fn sys(&self, i: usize, j: usize) -> usize {
        debug_assert!(j >= 1);
        i * (self.grid.n_h() - 1) + (j - 1)
    }

    fn top_row(&self) -> usize {
        self.grid.n_h() - 1
    }

    /// Income scale h_j^alpha F_i^xi multiplying the investment control.
    pub fn income(&self, i: usize, j: usize) -> f64 {
        self.h_alpha[j] * self.f_xi[i]
    }

    /// Capital drift under investment f at node (i, j).
    pub fn drift_h(&self, i: usize, j: usize, f: f64) -> f64 {
        f * self.income(i, j) - self.params.zeta * self.grid.h_node(j)
    }

    /// Coefficient of (1-f)^m in the running utility at node (i, j).
    fn util_coeff(&self, i: usize, j: usize) -> f64 {
        self.a_pow[i] * self.h_util[j] * self.f_util[i] / (1.0 - self.params.p_crra)
    }

    /// Outgoing chain rates at node (i, j >= 1) under controls (v, f).
    pub fn chain_rates(&self, i: usize, j: usize, v: f64, f: f64) -> ChainRates {
        let dx = self.grid.dx();
        let dh = self.grid.dh();
        let b = self.drift_h(i, j, f);
        let xp = self.diff_x + v.max(0.0) / dx;
        let xm = self.diff_x + (-v).max(0.0) / dx;
        if j == self.top_row() {
            // reflecting cap: no outward motion
            ChainRates {
                xp,
                xm,
                hp: 0.0,
                hm: self.diff_h[j] + (-b).max(0.0) / dh,
            }
        } else {
            ChainRates {
                xp,
                xm,
                hp: self.diff_h[j] + b.max(0.0) / dh,
                hm: self.diff_h[j] + (-b).max(0.0) / dh,
            }
        }
    }

    /// Value of V at (i, j) with the Dirichlet row folded in.
    fn v_at(&self, v: &[f64], i: usize, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            v[self.sys(i, j)]
        }
    }

    /// Maximized x-Hamiltonian at a node: candidates are the clamped linear
    /// feedbacks on the forward and backward differences plus staying put.
    fn h0_branch_max(&self, p_fwd: f64, p_bwd: f64) -> (f64, f64) {
        let c = self.params.move_cost_coeff;
        let vm = self.params.v_max;
        let mut best_val = 0.0;
        let mut best_v = 0.0;
        let v_up = (p_fwd / c).clamp(0.0, vm);
        let val_up = v_up * p_fwd - 0.5 * c * v_up * v_up;
        if val_up > best_val {
            best_val = val_up;
            best_v = v_up;
        }
        let v_dn = (p_bwd / c).clamp(-vm, 0.0);
        let val_dn = v_dn * p_bwd - 0.5 * c * v_dn * v_dn;
        if val_dn > best_val {
            best_val = val_dn;
            best_v = v_dn;
        }
        (best_val, best_v)
    }

    /// Maximized h-Hamiltonian at a node, split at the zero-drift
    /// investment level f0 so each branch sees its upwind costate.
    /// Returns (value, f*).
    fn h1_branch_max(&self, i: usize, j: usize, q_fwd: f64, q_bwd: f64) -> (f64, f64) {
        let income = self.income(i, j);
        let c_util = self.util_coeff(i, j);
        let m = self.coeffs.m();
        let zeta_h = self.params.zeta * self.grid.h_node(j);
        let f0 = if income > 0.0 {
            (zeta_h / income).min(1.0)
        } else {
            1.0
        };
        let eval = |f: f64, q: f64| (f * income - zeta_h) * q + c_util * (1.0 - f).powf(m);

        // downward branch: f in [0, f0], drift <= 0, costate q_bwd
        let f_dn = optimal_f_inner(q_bwd * income, c_util, m, q_bwd).clamp(0.0, f0);
        let mut best_val = eval(f_dn, q_bwd);
        let mut best_f = f_dn;
        if j < self.top_row() {
            // upward branch: f in [f0, 1], drift >= 0, costate q_fwd
            let f_up = optimal_f_inner(q_fwd * income, c_util, m, q_fwd).clamp(f0, 1.0);
            let val_up = eval(f_up, q_fwd);
            if val_up > best_val {
                best_val = val_up;
                best_f = f_up;
            }
        }
        (best_val, best_f)
    }

    /// Policy improvement: the maximizing controls at every node of `v`.
    pub fn improve_policy(&self, value: &[f64]) -> PolicyField {
        let nx = self.grid.n_x();
        let nh = self.grid.n_h();
        let dx = self.grid.dx();
        let dh = self.grid.dh();
        let mut policy = PolicyField::zeros(self.grid.clone());
        for i in 0..nx {
            let ip = self.grid.spatial.wrap(i, 1);
            let im = self.grid.spatial.wrap(i, -1);
            for j in 1..nh {
                let here = self.v_at(value, i, j);
                let p_fwd = (self.v_at(value, ip, j) - here) / dx;
                let p_bwd = (here - self.v_at(value, im, j)) / dx;
                let (_, v_star) = self.h0_branch_max(p_fwd, p_bwd);
                let q_fwd = if j < nh - 1 {
                    (self.v_at(value, i, j + 1) - here) / dh
                } else {
                    0.0
                };
                let q_bwd = (here - self.v_at(value, i, j - 1)) / dh;
                let (_, f_star) = self.h1_branch_max(i, j, q_fwd, q_bwd);
                let k = self.grid.idx(i, j);
                policy.v_star[k] = v_star;
                policy.f_star[k] = f_star;
            }
            // h = 0: no income, no motion incentive; keep the zero controls.
        }
        policy
    }

    /// Residual of the discrete Bellman equation at `value`, recomputed
    /// nodewise from the maximized numerical Hamiltonians.
    pub fn bellman_residual(&self, value: &[f64]) -> Vec<f64> {
        let nx = self.grid.n_x();
        let nh = self.grid.n_h();
        let dx = self.grid.dx();
        let dh = self.grid.dh();
        let rho = self.params.rho;
        let mut res = vec![0.0; self.n_sys()];
        for i in 0..nx {
            let ip = self.grid.spatial.wrap(i, 1);
            let im = self.grid.spatial.wrap(i, -1);
            for j in 1..nh {
                let here = self.v_at(value, i, j);
                let v_xp = self.v_at(value, ip, j);
                let v_xm = self.v_at(value, im, j);
                let p_fwd = (v_xp - here) / dx;
                let p_bwd = (here - v_xm) / dx;
                let (h0_val, _) = self.h0_branch_max(p_fwd, p_bwd);
                let diff_x = self.diff_x * (v_xp - 2.0 * here + v_xm);
                let (q_fwd, diff_h) = if j < nh - 1 {
                    let v_hp = self.v_at(value, i, j + 1);
                    let v_hm = self.v_at(value, i, j - 1);
                    (
                        (v_hp - here) / dh,
                        self.diff_h[j] * (v_hp - 2.0 * here + v_hm),
                    )
                } else {
                    // reflecting cap: one-sided diffusion, no upward costate
                    let v_hm = self.v_at(value, i, j - 1);
                    (0.0, self.diff_h[j] * (v_hm - here))
                };
                let q_bwd = (here - self.v_at(value, i, j - 1)) / dh;
                let (h1_val, _) = self.h1_branch_max(i, j, q_fwd, q_bwd);
                res[self.sys(i, j)] = rho * here - (h1_val + diff_h + diff_x + h0_val);
            }
        }
        res
    }

    /// Running payoff under a frozen policy: utility of consumption minus
    /// the movement cost, per system node.
    pub fn running_payoff(&self, policy: &PolicyField) -> Vec<f64> {
        let nx = self.grid.n_x();
        let nh = self.grid.n_h();
        let m = self.coeffs.m();
        let c = self.params.move_cost_coeff;
        let mut out = vec![0.0; self.n_sys()];
        for i in 0..nx {
            for j in 1..nh {
                let k = self.grid.idx(i, j);
                let f = policy.f_star[k];
                let v = policy.v_star[k];
                let util = self.util_coeff(i, j) * (1.0 - f).powf(m);
                out[self.sys(i, j)] = util - 0.5 * c * v * v;
            }
        }
        out
    }

    /// Assemble the linear system (rho I - G_pi) V = r_pi of the policy
    /// evaluation step. Entries per row: diagonal, x+, x-, h+, h-.
    pub fn assemble_hjb(&self, policy: &PolicyField) -> (Csr, Vec<f64>) {
        let nx = self.grid.n_x();
        let nh = self.grid.n_h();
        let rho = self.params.rho;
        let mut builder = CsrBuilder::new(self.n_sys());
        for i in 0..nx {
            let ip = self.grid.spatial.wrap(i, 1);
            let im = self.grid.spatial.wrap(i, -1);
            for j in 1..nh {
                let k = self.grid.idx(i, j);
                let r = self.chain_rates(i, j, policy.v_star[k], policy.f_star[k]);
                builder.push(self.sys(i, j), rho + r.xp + r.xm + r.hp + r.hm);
                builder.push(self.sys(ip, j), -r.xp);
                builder.push(self.sys(im, j), -r.xm);
                if j + 1 < nh {
                    builder.push(self.sys(i, j + 1), -r.hp);
                }
                if j >= 2 {
                    builder.push(self.sys(i, j - 1), -r.hm);
                }
                // j == 1: the h- transition absorbs into the Dirichlet value
                // V = 0; the rate stays on the diagonal with no off entry.
                builder.finish_row();
            }
        }
        (builder.build(), self.running_payoff(policy))
    }

    /// Assemble the stationary Fokker-Planck operator: the transpose of the
    /// frozen-policy chain generator, with the no-flux fold at h = dh.
    /// Row u collects the incoming rates in fixed stencil order:
    /// diagonal, from x-, from x+, from h-, from h+.
    pub fn assemble_fp(&self, policy: &PolicyField) -> Csr {
        let nx = self.grid.n_x();
        let nh = self.grid.n_h();
        let rate_of = |i: usize, j: usize| {
            let k = self.grid.idx(i, j);
            self.chain_rates(i, j, policy.v_star[k], policy.f_star[k])
        };
        let mut builder = CsrBuilder::new(self.n_sys());
        for i in 0..nx {
            let ip = self.grid.spatial.wrap(i, 1);
            let im = self.grid.spatial.wrap(i, -1);
            for j in 1..nh {
                let own = rate_of(i, j);
                // no-flux at the h = 0 face: the downward rate of row 1 is
                // folded away (the chain reflects instead of leaving).
                let own_out = own.xp + own.xm + own.hp + if j >= 2 { own.hm } else { 0.0 };
                builder.push(self.sys(i, j), -own_out);
                builder.push(self.sys(im, j), rate_of(im, j).xp);
                builder.push(self.sys(ip, j), rate_of(ip, j).xm);
                if j >= 2 {
                    builder.push(self.sys(i, j - 1), rate_of(i, j - 1).hp);
                }
                if j + 1 < nh {
                    builder.push(self.sys(i, j + 1), rate_of(i, j + 1).hm);
                }
                builder.finish_row();
            }
        }
        builder.build()
    }
}
