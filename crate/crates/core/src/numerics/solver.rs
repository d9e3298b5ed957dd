//! BiCGSTAB for the upwind transport-diffusion systems.
//!
//! The systems assembled by the solvers are strictly diagonally dominant
//! M-matrices, for which diagonally scaled BiCGSTAB is reliable. All inner
//! products are exactly rounded, so the iteration is deterministic and
//! commutes with grid rotations.

use super::exact;
use super::sparse::Csr;

/// Result of a linear solve.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub converged: bool,
    pub iterations: usize,
    /// Sup norm of the true residual b - A x at exit.
    pub residual: f64,
}

/// Solve A x = b with Jacobi-scaled BiCGSTAB, starting from `x`.
///
/// Convergence is declared on the sup norm of the true (unscaled) residual
/// falling below `tol`. `max_iters` bounds the Krylov iterations.
pub fn bicgstab(a: &Csr, b: &[f64], x: &mut [f64], tol: f64, max_iters: usize) -> SolveOutcome {
    let n = a.n();
    debug_assert_eq!(b.len(), n);
    debug_assert_eq!(x.len(), n);

    // Row-equilibrate: solve (D^-1 A) x = D^-1 b. The scaling is per-row and
    // therefore rotation-covariant.
    let diag = a.diagonal();
    let mut scale = vec![0.0; n];
    for i in 0..n {
        debug_assert!(diag[i] != 0.0, "zero diagonal in row {i}");
        scale[i] = 1.0 / diag[i];
    }
    let mut m = a.clone();
    m.scale_rows(&scale);
    let bs: Vec<f64> = (0..n).map(|i| b[i] * scale[i]).collect();

    let mut r = vec![0.0; n];
    m.residual(x, &bs, &mut r);
    let mut r_hat = r.clone();
    let mut rho = 1.0;
    let mut alpha = 1.0;
    let mut omega = 1.0;
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];

    let true_residual = |x: &[f64], work: &mut Vec<f64>| -> f64 {
        a.residual(x, b, work);
        super::sup_norm(work)
    };

    let mut work = vec![0.0; n];
    let mut best = true_residual(x, &mut work);
    if best <= tol {
        return SolveOutcome {
            converged: true,
            iterations: 0,
            residual: best,
        };
    }

    for iter in 1..=max_iters {
        let rho_new = exact::dot(&r_hat, &r);
        if rho_new == 0.0 || !rho_new.is_finite() {
            // Lanczos breakdown: restart with the current residual.
            m.residual(x, &bs, &mut r);
            r_hat.copy_from_slice(&r);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            for e in p.iter_mut() {
                *e = 0.0;
            }
            for e in v.iter_mut() {
                *e = 0.0;
            }
            continue;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        m.mul(&p, &mut v);
        let rhv = exact::dot(&r_hat, &v);
        if rhv == 0.0 || !rhv.is_finite() {
            m.residual(x, &bs, &mut r);
            r_hat.copy_from_slice(&r);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            continue;
        }
        alpha = rho / rhv;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        m.mul(&s, &mut t);
        let tt = exact::dot(&t, &t);
        omega = if tt > 0.0 {
            exact::dot(&t, &s) / tt
        } else {
            0.0
        };
        for i in 0..n {
            x[i] += alpha * p[i] + omega * s[i];
        }
        for i in 0..n {
            r[i] = s[i] - omega * t[i];
        }

        let scaled_norm = super::sup_norm(&r);
        // Only pay for the true residual when the scaled one looks done.
        if scaled_norm <= tol || iter == max_iters {
            let actual = true_residual(x, &mut work);
            best = actual;
            if actual <= tol {
                return SolveOutcome {
                    converged: true,
                    iterations: iter,
                    residual: actual,
                };
            }
        }
        if omega == 0.0 || !omega.is_finite() {
            m.residual(x, &bs, &mut r);
            r_hat.copy_from_slice(&r);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
        }
    }

    SolveOutcome {
        converged: false,
        iterations: max_iters,
        residual: best,
    }
}
