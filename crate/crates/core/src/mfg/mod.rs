//! Stationary mean field game solver for spatial human-capital
//! accumulation.
//!
//! The equilibrium couples a Hamilton-Jacobi-Bellman equation for the value
//! function V(x, h) with a stationary Fokker-Planck equation for the
//! population density mu(x, h):
//!
//! ```text
//! rho V = H1(x, h, mu, d_h V) + sigma^2 h^2/2 d2_hh V
//!         + eps^2/2 d2_xx V + H0(d_x V)
//! sigma^2/2 d2_hh(h^2 mu) + eps^2/2 d2_xx mu
//!         = d_x(v* mu) + d_h((f* h^a F^xi - zeta h) mu)
//! ```
//!
//! solved by damped fixed-point iteration over the density: each sweep
//! solves the HJB at the current density (policy iteration over the
//! monotone upwind scheme in [`operator`]), pushes the optimal controls
//! through the stationary Fokker-Planck solve, and relaxes. The spatial
//! marginal of the converged density is what the epidemic model consumes.

pub mod fields;
pub mod fixed_point;
pub mod fp;
pub mod hamiltonian;
pub mod hjb;
pub mod interaction;
pub mod operator;
pub mod params;

pub use fields::{DensityField, PolicyField, SpatialDensity, ValueField};
pub use fixed_point::{expand_hmax, mfg_fixed_point, MfgEquilibrium};
pub use fp::fp_solve;
pub use hamiltonian::{hamiltonian_h0, hamiltonian_h1, optimal_f, utility, H1Coeffs, H0, H1};
pub use hjb::hjb_solve;
pub use interaction::interaction_f;
pub use operator::MfgOperator;
pub use params::{amenity_sin_peak, AmenityProfile, EtaParams, MfgParams};

#[cfg(test)]
pub(crate) mod test_util {
    /// Deterministic split-mix generator for randomized oracle tests.
    pub struct SplitMix64(u64);

    impl SplitMix64 {
        pub fn new(seed: u64) -> Self {
            SplitMix64(seed)
        }

        pub fn next_u64(&mut self) -> u64 {
            self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        }

        pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
            let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            lo + (hi - lo) * u
        }
    }
}
