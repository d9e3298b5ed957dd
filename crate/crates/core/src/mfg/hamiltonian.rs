//! The two Hamiltonians of the coupled control problem and their
//! closed-form maximizers.
//!
//! Movement: H0(p) = sup over |v| <= v_max of (v p - c v^2 / 2), maximized
//! by the clamped linear feedback v* = clamp(p / c).
//!
//! Investment: H1 maximizes over f in [0, 1]
//!
//! ```text
//! (f h^alpha F^xi - zeta h) q  +  u(A [(1-f) h^alpha]^(1-gamma) F^gamma)
//! ```
//!
//! with CRRA utility u(z) = z^(1-p) / (1-p). Writing B = q h^alpha F^xi and
//! collecting the utility term as C (1-f)^m with m = (1-gamma)(1-p), the
//! stationarity condition B = m C (1-f)^(m-1) gives
//! f* = 1 - (m C / B)^(1/(1-m)), clamped to [0, 1]; B <= 0 forces f* = 0,
//! and a vanishing utility coefficient (h = 0 or F = 0) degenerates to the
//! bang-bang rule f* = 1 if q > 0 else 0.

use crate::error::{Error, Result};

/// CRRA utility z^(1-p)/(1-p); u(0) = 0.
pub fn utility(z: f64, p_crra: f64) -> Result<f64> {
    if z < 0.0 {
        return Err(Error::config(format!(
            "utility argument {z} outside the domain [0, inf)"
        )));
    }
    Ok(z.powf(1.0 - p_crra) / (1.0 - p_crra))
}

/// Value and maximizer of the movement Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct H0 {
    pub value: f64,
    pub v_star: f64,
}

/// H0(p) with quadratic cost c v^2/2 on the control set [-v_max, v_max].
pub fn hamiltonian_h0(p: f64, move_cost: f64, v_max: f64) -> H0 {
    let v_star = (p / move_cost).clamp(-v_max, v_max);
    H0 {
        value: v_star * p - 0.5 * move_cost * v_star * v_star,
        v_star,
    }
}

/// Value and maximizer of the investment Hamiltonian at a single costate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct H1 {
    pub value: f64,
    pub f_star: f64,
}

/// Economic constants entering H1 (a view into the MFG parameters).
#[derive(Clone, Copy, Debug)]
pub struct H1Coeffs {
    pub alpha: f64,
    pub xi_spill: f64,
    pub gamma: f64,
    pub zeta: f64,
    pub p_crra: f64,
}

impl H1Coeffs {
    /// Exponent of (1-f) in the utility term.
    pub fn m(&self) -> f64 {
        (1.0 - self.gamma) * (1.0 - self.p_crra)
    }
}

/// Maximize the investment objective over f in [0, 1].
///
/// `a_x` is the amenity level at the position, `h` the capital level,
/// `f_val` the interaction average F, `q` the capital costate.
pub fn hamiltonian_h1(a_x: f64, h: f64, f_val: f64, q: f64, c: &H1Coeffs) -> H1 {
    let income = h.powf(c.alpha) * f_val.powf(c.xi_spill); // f-linear drift scale
    let b_lin = q * income;
    let m = c.m();
    // coefficient of (1-f)^m: u(A ((1-f) h^alpha)^(1-gamma) F^gamma)
    let c_util =
        a_x.powf(1.0 - c.p_crra) * h.powf(c.alpha * m) * f_val.powf(c.gamma * (1.0 - c.p_crra))
            / (1.0 - c.p_crra);
    let f_star = optimal_f_inner(b_lin, c_util, m, q);
    let drift_payoff = (f_star * income - c.zeta * h) * q;
    let value = drift_payoff + c_util * (1.0 - f_star).powf(m);
    H1 { value, f_star }
}

/// The maximizer alone (same arguments as [`hamiltonian_h1`]).
pub fn optimal_f(a_x: f64, h: f64, f_val: f64, q: f64, c: &H1Coeffs) -> f64 {
    hamiltonian_h1(a_x, h, f_val, q, c).f_star
}

pub(crate) fn optimal_f_inner(b_lin: f64, c_util: f64, m: f64, q: f64) -> f64 {
    if c_util == 0.0 {
        // h = 0 or F = 0: the utility term vanishes identically and the
        // objective is linear in f.
        return if q > 0.0 { 1.0 } else { 0.0 };
    }
    if b_lin <= 0.0 {
        return 0.0;
    }
    let ratio = m * c_util / b_lin;
    let one_minus_f = ratio.powf(1.0 / (1.0 - m));
    (1.0 - one_minus_f).clamp(0.0, 1.0)
}

/// Maximize over f restricted to [lo, hi] (used by the upwind scheme, which
/// splits the investment range at the zero-drift level).
pub fn hamiltonian_h1_on(
    a_x: f64,
    h: f64,
    f_val: f64,
    q: f64,
    c: &H1Coeffs,
    lo: f64,
    hi: f64,
) -> H1 {
    debug_assert!(lo <= hi);
    let income = h.powf(c.alpha) * f_val.powf(c.xi_spill);
    let b_lin = q * income;
    let m = c.m();
    let c_util =
        a_x.powf(1.0 - c.p_crra) * h.powf(c.alpha * m) * f_val.powf(c.gamma * (1.0 - c.p_crra))
            / (1.0 - c.p_crra);
    let f_star = optimal_f_inner(b_lin, c_util, m, q).clamp(lo, hi);
    let drift_payoff = (f_star * income - c.zeta * h) * q;
    let value = drift_payoff + c_util * (1.0 - f_star).powf(m);
    H1 { value, f_star }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfg::test_util::SplitMix64;

    #[test]
    fn utility_reference_values() {
        assert!((utility(1.0, 0.1).unwrap() - 1.0 / 0.9).abs() < 1e-12);
        assert_eq!(utility(0.0, 0.1).unwrap(), 0.0);
        assert!((utility(16.0, 0.5).unwrap() - 8.0).abs() < 1e-12);
        assert!(utility(-0.1, 0.1).is_err());
    }

    #[test]
    fn utility_increasing_and_concave() {
        let p = 0.3;
        let mut prev = 0.0;
        let mut prev_gap = f64::INFINITY;
        for k in 1..200 {
            let z = k as f64 * 0.1;
            let u = utility(z, p).unwrap();
            assert!(u > prev);
            let gap = u - prev;
            assert!(gap < prev_gap);
            prev = u;
            prev_gap = gap;
        }
    }

    /// Brute-force maximization of the movement objective on a v grid.
    fn h0_brute(p: f64, c: f64, v_max: f64, points: usize) -> H0 {
        let mut best = H0 {
            value: f64::NEG_INFINITY,
            v_star: 0.0,
        };
        for k in 0..=points {
            let v = -v_max + 2.0 * v_max * (k as f64) / (points as f64);
            let val = v * p - 0.5 * c * v * v;
            if val > best.value {
                best = H0 {
                    value: val,
                    v_star: v,
                };
            }
        }
        best
    }

    /// Brute-force maximization of the investment objective on an f grid.
    fn h1_brute(a_x: f64, h: f64, f_val: f64, q: f64, c: &H1Coeffs, points: usize) -> H1 {
        let income = h.powf(c.alpha) * f_val.powf(c.xi_spill);
        let m = c.m();
        let c_util =
            a_x.powf(1.0 - c.p_crra) * h.powf(c.alpha * m) * f_val.powf(c.gamma * (1.0 - c.p_crra))
                / (1.0 - c.p_crra);
        let mut best = H1 {
            value: f64::NEG_INFINITY,
            f_star: 0.0,
        };
        for k in 0..=points {
            let f = k as f64 / points as f64;
            let val = (f * income - c.zeta * h) * q + c_util * (1.0 - f).powf(m);
            if val > best.value {
                best = H1 {
                    value: val,
                    f_star: f,
                };
            }
        }
        best
    }

    #[test]
    fn h0_reference_cases() {
        let z = hamiltonian_h0(0.0, 1.0, 1.0);
        assert_eq!(z.value, 0.0);
        assert_eq!(z.v_star, 0.0);
        let interior = hamiltonian_h0(0.5, 1.0, 1.0);
        assert!((interior.value - 0.125).abs() < 1e-12);
        assert!((interior.v_star - 0.5).abs() < 1e-12);
        let clamped = hamiltonian_h0(2.0, 1.0, 1.0);
        assert!((clamped.value - 1.5).abs() < 1e-12);
        assert_eq!(clamped.v_star, 1.0);
        // symmetry and convexity spot checks
        for p in [-1.7, -0.2, 0.0, 0.3, 2.4] {
            let a = hamiltonian_h0(p, 1.0, 1.0);
            let b = hamiltonian_h0(-p, 1.0, 1.0);
            assert!((a.value - b.value).abs() < 1e-14);
        }
    }

    #[test]
    fn h0_matches_brute_force() {
        let mut rng = SplitMix64::new(0x5eed_0001);
        for _ in 0..100 {
            let p = rng.uniform(-8.0, 8.0);
            let c = rng.uniform(0.2, 5.0);
            let closed = hamiltonian_h0(p, c, 1.0);
            let brute = h0_brute(p, c, 1.0, 200_000);
            assert!(
                (closed.value - brute.value).abs() <= 1e-6,
                "H0 mismatch at p={p}, c={c}: {} vs {}",
                closed.value,
                brute.value
            );
            assert!(
                (closed.v_star - brute.v_star).abs() <= 1e-5 / 2.0 + 1e-12,
                "v* mismatch at p={p}, c={c}"
            );
        }
    }

    #[test]
    fn h1_worked_case() {
        let c = H1Coeffs {
            alpha: 0.5,
            xi_spill: 0.1,
            gamma: 0.15,
            zeta: 0.15,
            p_crra: 0.1,
        };
        // q <= 0 shuts investment off entirely
        assert_eq!(hamiltonian_h1(1.0, 4.0, 2.0, -0.5, &c).f_star, 0.0);
        // small positive costate: consumption still dominates
        assert_eq!(hamiltonian_h1(1.0, 4.0, 2.0, 0.2, &c).f_star, 0.0);
        // the reference interior case
        let h1 = hamiltonian_h1(1.0, 4.0, 2.0, 1.0, &c);
        assert!(
            (h1.f_star - 0.722).abs() < 1e-3,
            "f* = {} (expected ~0.722)",
            h1.f_star
        );
        let brute = h1_brute(1.0, 4.0, 2.0, 1.0, &c, 1_000_000);
        assert!((h1.f_star - brute.f_star).abs() <= 1e-4);
        assert!((h1.value - brute.value).abs() <= 1e-9 * h1.value.abs().max(1.0));
    }

    #[test]
    fn h1_matches_brute_force_randomized() {
        let mut rng = SplitMix64::new(0x5eed_0002);
        for draw in 0..100 {
            let alpha = rng.uniform(0.5, 0.8);
            let xi = rng.uniform(0.02, (1.0 - alpha).min(0.4) * 0.95);
            let c = H1Coeffs {
                alpha,
                xi_spill: xi,
                gamma: rng.uniform(0.05, 0.9),
                zeta: rng.uniform(0.01, 0.5),
                p_crra: rng.uniform(0.05, 0.9),
            };
            let a_x = rng.uniform(0.3, 3.0);
            let h = rng.uniform(0.0, 15.0);
            let f_val = rng.uniform(0.0, 15.0);
            let q = rng.uniform(-2.0, 3.0);
            let closed = hamiltonian_h1(a_x, h, f_val, q, &c);
            let brute = h1_brute(a_x, h, f_val, q, &c, 100_000);
            assert!(
                (closed.f_star - brute.f_star).abs() <= 1e-4,
                "draw {draw}: f* {} vs brute {}",
                closed.f_star,
                brute.f_star
            );
            assert!(
                closed.value >= brute.value - 1e-10 * brute.value.abs().max(1.0),
                "draw {draw}: closed value below brute-force value"
            );
        }
    }

    #[test]
    fn h1_degenerate_levels() {
        let c = H1Coeffs {
            alpha: 0.5,
            xi_spill: 0.1,
            gamma: 0.15,
            zeta: 0.15,
            p_crra: 0.1,
        };
        // h = 0: no income, no utility; value is 0 regardless of q
        let at_zero = hamiltonian_h1(1.0, 0.0, 2.0, 1.5, &c);
        assert_eq!(at_zero.f_star, 1.0);
        assert_eq!(at_zero.value, 0.0);
        let at_zero_neg = hamiltonian_h1(1.0, 0.0, 2.0, -1.5, &c);
        assert_eq!(at_zero_neg.f_star, 0.0);
        // F = 0: drift term dies (xi > 0) and utility dies (gamma > 0)
        let no_field = hamiltonian_h1(1.0, 4.0, 0.0, 1.5, &c);
        assert_eq!(no_field.f_star, 1.0);
        assert!((no_field.value - (-c.zeta * 4.0 * 1.5)).abs() < 1e-12);
    }

    #[test]
    fn h1_restricted_range() {
        let c = H1Coeffs {
            alpha: 0.5,
            xi_spill: 0.1,
            gamma: 0.15,
            zeta: 0.15,
            p_crra: 0.1,
        };
        let free = hamiltonian_h1(1.0, 4.0, 2.0, 1.0, &c);
        let pinned = hamiltonian_h1_on(1.0, 4.0, 2.0, 1.0, &c, 0.0, 0.3);
        assert_eq!(pinned.f_star, 0.3);
        assert!(pinned.value <= free.value);
        let wide = hamiltonian_h1_on(1.0, 4.0, 2.0, 1.0, &c, 0.0, 1.0);
        assert_eq!(wide.f_star, free.f_star);
    }
}
