//! Spatial SEIRD epidemic on the torus with nonlocal convolution incidence.
//!
//! The population is split pointwise into susceptible, exposed, infectious,
//! recovered, and dead fractions of an exogenous, time-constant spatial
//! density mu(x):
//!
//! ```text
//! dS/dt = -beta(mu - D) S/(mu - D) (K * I)
//! dE/dt = +beta(mu - D) S/(mu - D) (K * I) - theta E
//! dI/dt = theta E - lambda I - delta I
//! dR/dt = lambda I
//! dD/dt = delta I
//! ```
//!
//! There is no movement term: infection propagates only through the
//! convolution of the infectious field with the compactly supported kernel
//! K. The five right-hand sides cancel pointwise, so S + E + I + R + D
//! equals mu(x) at every node for all time, up to rounding.
//!
//! Integration is classical fixed-step RK4 with the convolution recomputed
//! at every stage; the rates are order one per day, so the system is far
//! from stiff at the default step.

mod dynamics;
mod stats;

pub use dynamics::{
    beta_of_mu, incidence, initial_state, simulate, simulate_from, step, Aggregate, BetaMode,
    CompartmentState, DensityProfile, DensitySource, EpidemicParams, Snapshot, Trajectory,
};
pub use stats::{summary_stats, SummaryStats};
