//! Compartment state, transmission laws, and the RK4 integrator.

use crate::error::{Error, Result};
use crate::numerics::min_value;
use crate::torus::{
    build_infection_kernel, mollified_indicator, periodic_convolve, KernelProfile, PeriodicGrid,
    ScalarField,
};

/// How the transmission rate depends on the local (living) density.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaMode {
    /// beta = beta0 regardless of density.
    Constant,
    /// beta(z) = beta0 sqrt(z (1 + z) / 2): increasing, beta(0) = 0, and
    /// exactly beta0 at z = 1.
    DensityDependent,
}

/// Epidemic model parameters (rates per day, lengths in torus units).
#[derive(Clone, Debug, PartialEq)]
pub struct EpidemicParams {
    /// Latency exit rate theta.
    pub theta: f64,
    /// Recovery rate lambda.
    pub lambda_rec: f64,
    /// Death rate delta.
    pub delta: f64,
    pub beta_mode: BetaMode,
    /// Base transmission rate.
    pub beta0: f64,
    /// Infection kernel support half-width.
    pub chi: f64,
    /// Initial infected level inside the seed cluster.
    pub i0: f64,
    /// Seed cluster radius.
    pub r0: f64,
    /// Seed cluster center.
    pub center: f64,
    /// Horizon in days.
    pub t_end: f64,
    /// Time step in days.
    pub dt: f64,
    /// Snapshot cadence in days (must be an integer multiple of dt).
    pub snapshot_every: f64,
}

impl Default for EpidemicParams {
    fn default() -> Self {
        EpidemicParams {
            theta: 0.25,
            lambda_rec: 0.075,
            delta: 0.025,
            beta_mode: BetaMode::Constant,
            beta0: 0.9,
            chi: 0.04,
            i0: 0.01,
            r0: 0.1,
            center: 0.3,
            t_end: 100.0,
            dt: 0.01,
            snapshot_every: 0.5,
        }
    }
}

impl EpidemicParams {
    /// Parameter invariants that do not need the density.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("epidemic.theta", self.theta),
            ("epidemic.lambda", self.lambda_rec),
            ("epidemic.delta", self.delta),
            ("epidemic.beta0", self.beta0),
            ("epidemic.dt", self.dt),
            ("epidemic.t_end", self.t_end),
            ("epidemic.i0", self.i0),
        ] {
            if !(v > 0.0) {
                return Err(Error::config(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.chi > 0.0 && self.chi < 0.5) {
            return Err(Error::config(format!(
                "epidemic.chi = {} violates 0 < chi < 1/2",
                self.chi
            )));
        }
        if !(self.r0 > 0.0 && self.r0 < 0.5) {
            return Err(Error::config(format!(
                "epidemic.r0 = {} violates 0 < r0 < 1/2",
                self.r0
            )));
        }
        if !(self.snapshot_every >= self.dt) {
            return Err(Error::config(format!(
                "epidemic.snapshot_every = {} is below dt = {}",
                self.snapshot_every, self.dt
            )));
        }
        let steps = self.snapshot_every / self.dt;
        if (steps - steps.round()).abs() > 1e-6 {
            return Err(Error::config(format!(
                "epidemic.snapshot_every = {} is not an integer multiple of dt = {}",
                self.snapshot_every, self.dt
            )));
        }
        Ok(())
    }

    /// Stability bound on the step: 0.1 over the fastest rate in the system,
    /// with the transmission rate taken at its densest point.
    pub fn dt_max(&self, density: &DensityProfile) -> Result<f64> {
        let mut beta_max: f64 = 0.0;
        for &m in &density.values {
            beta_max = beta_max.max(beta_of_mu(m, self.beta_mode, self.beta0)?);
        }
        let fastest = self.theta.max(self.lambda_rec + self.delta).max(beta_max);
        Ok(0.1 / fastest)
    }

    /// Validation that needs the density: the seed must fit under the local
    /// population and the step must respect the stability bound.
    pub fn validate_against(&self, density: &DensityProfile) -> Result<()> {
        self.validate()?;
        let min_mu = min_value(&density.values);
        if !(self.i0 < min_mu) {
            return Err(Error::config(format!(
                "initial cluster exceeds local population: i0 = {} vs min mu = {min_mu}",
                self.i0
            )));
        }
        let bound = self.dt_max(density)?;
        if self.dt > bound {
            return Err(Error::config(format!(
                "epidemic.dt = {} exceeds the stability bound {bound:.4}",
                self.dt
            )));
        }
        Ok(())
    }

    /// The infection kernel on `grid`, mollified over two cells.
    pub fn build_kernel(&self, grid: &PeriodicGrid) -> Result<KernelProfile> {
        build_infection_kernel(grid, self.chi, 2.0 * grid.dx())
    }
}

/// Where a density profile came from (affects validation).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensitySource {
    Uniform,
    Mfg,
    File,
}

/// Exogenous, time-constant spatial density driving the epidemic.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub grid: PeriodicGrid,
    pub values: Vec<f64>,
    pub source: DensitySource,
}

impl DensityProfile {
    /// The uniform profile mu = 1.
    pub fn uniform(grid: PeriodicGrid) -> Self {
        let n = grid.n_x();
        DensityProfile {
            grid,
            values: vec![1.0; n],
            source: DensitySource::Uniform,
        }
    }

    /// Wrap a spatial density from the MFG marginal or a file.
    pub fn from_values(
        grid: PeriodicGrid,
        values: Vec<f64>,
        source: DensitySource,
    ) -> Result<Self> {
        if values.len() != grid.n_x() {
            return Err(Error::config(format!(
                "density sample count {} does not match n_x = {}",
                values.len(),
                grid.n_x()
            )));
        }
        let profile = DensityProfile {
            grid,
            values,
            source,
        };
        profile.check()?;
        Ok(profile)
    }

    pub fn check(&self) -> Result<()> {
        for (i, &v) in self.values.iter().enumerate() {
            if !(v > 0.0) {
                return Err(Error::config(format!(
                    "density must be strictly positive; mu(x_{i}) = {v}"
                )));
            }
        }
        match self.source {
            DensitySource::Uniform => {
                if self.values.iter().any(|&v| v != 1.0) {
                    return Err(Error::config("uniform density must be identically 1"));
                }
            }
            DensitySource::Mfg | DensitySource::File => {
                let mass = self.grid.integrate(&self.values);
                if (mass - 1.0).abs() > 1e-8 {
                    return Err(Error::config(format!(
                        "density mass {mass} differs from 1 beyond 1e-8"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The five compartment fields at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct CompartmentState {
    pub grid: PeriodicGrid,
    pub s: Vec<f64>,
    pub e: Vec<f64>,
    pub i: Vec<f64>,
    pub r: Vec<f64>,
    pub d: Vec<f64>,
    pub t: f64,
}

impl CompartmentState {
    /// Spatially uniform split of a uniform density (used by the 0-D
    /// reduction tests): I = i0, S = mu - i0 everywhere.
    pub fn spatially_uniform(grid: PeriodicGrid, mu: f64, i0: f64) -> Self {
        let n = grid.n_x();
        CompartmentState {
            grid,
            s: vec![mu - i0; n],
            e: vec![0.0; n],
            i: vec![i0; n],
            r: vec![0.0; n],
            d: vec![0.0; n],
            t: 0.0,
        }
    }

    /// Max pointwise deviation of S+E+I+R+D from the density.
    pub fn conservation_error(&self, density: &DensityProfile) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.grid.n_x() {
            let total = self.s[k] + self.e[k] + self.i[k] + self.r[k] + self.d[k];
            worst = worst.max((total - density.values[k]).abs());
        }
        worst
    }

    fn min_over_fields(&self) -> f64 {
        min_value(&self.s)
            .min(min_value(&self.e))
            .min(min_value(&self.i))
            .min(min_value(&self.r))
            .min(min_value(&self.d))
    }

    fn all_finite(&self) -> bool {
        self.s
            .iter()
            .chain(&self.e)
            .chain(&self.i)
            .chain(&self.r)
            .chain(&self.d)
            .all(|v| v.is_finite())
    }
}

/// Transmission rate at local living density `mu_val`.
pub fn beta_of_mu(mu_val: f64, mode: BetaMode, beta0: f64) -> Result<f64> {
    if mu_val < 0.0 {
        return Err(Error::config(format!(
            "transmission rate queried at negative density {mu_val}"
        )));
    }
    Ok(match mode {
        BetaMode::Constant => beta0,
        // written as sqrt(z(1+z)/2) so beta(1) is beta0 to the bit
        BetaMode::DensityDependent => beta0 * (mu_val * (1.0 + mu_val) / 2.0).sqrt(),
    })
}

/// New-infection rate field: beta(mu - D) S/(mu - D) (K * I).
pub fn incidence(
    state: &CompartmentState,
    density: &DensityProfile,
    kernel: &KernelProfile,
    params: &EpidemicParams,
) -> Result<ScalarField> {
    let i_field = ScalarField::new(state.grid.clone(), state.i.clone())?;
    let conv = periodic_convolve(kernel, &i_field)?;
    let mut values = vec![0.0; state.grid.n_x()];
    incidence_into(
        &state.s,
        &state.d,
        &conv.values,
        density,
        params,
        &mut values,
    )?;
    ScalarField::new(state.grid.clone(), values)
}

/// Nodewise incidence from precomputed convolution values.
fn incidence_into(
    s: &[f64],
    d: &[f64],
    conv_i: &[f64],
    density: &DensityProfile,
    params: &EpidemicParams,
    out: &mut [f64],
) -> Result<()> {
    for k in 0..out.len() {
        let living = density.values[k] - d[k];
        if living <= 1e-12 {
            return Err(Error::solver(format!(
                "population exhausted at node {k}: mu - D = {living}"
            )));
        }
        let beta = beta_of_mu(living, params.beta_mode, params.beta0)?;
        out[k] = beta * s[k] / living * conv_i[k];
    }
    Ok(())
}

/// One stage of right-hand sides. Shared terms are computed once per node so
/// the five components cancel pointwise to rounding.
struct Rhs {
    s: Vec<f64>,
    e: Vec<f64>,
    i: Vec<f64>,
    r: Vec<f64>,
    d: Vec<f64>,
}

fn eval_rhs(
    s: &[f64],
    e: &[f64],
    i: &[f64],
    d: &[f64],
    density: &DensityProfile,
    kernel: &KernelProfile,
    params: &EpidemicParams,
) -> Result<Rhs> {
    let grid = &density.grid;
    let n = grid.n_x();
    let i_field = ScalarField::new(grid.clone(), i.to_vec())?;
    let conv = periodic_convolve(kernel, &i_field)?;
    let mut inc = vec![0.0; n];
    incidence_into(s, d, &conv.values, density, params, &mut inc)?;
    let mut out = Rhs {
        s: vec![0.0; n],
        e: vec![0.0; n],
        i: vec![0.0; n],
        r: vec![0.0; n],
        d: vec![0.0; n],
    };
    for k in 0..n {
        let latency = params.theta * e[k];
        let recovery = params.lambda_rec * i[k];
        let death = params.delta * i[k];
        out.s[k] = -inc[k];
        out.e[k] = inc[k] - latency;
        out.i[k] = latency - recovery - death;
        out.r[k] = recovery;
        out.d[k] = death;
    }
    Ok(out)
}

/// Advance one classical RK4 step; the convolution is recomputed at every
/// stage. Errors on non-finite fields or negativity beyond -1e-8.
pub fn step(
    state: &CompartmentState,
    density: &DensityProfile,
    kernel: &KernelProfile,
    params: &EpidemicParams,
    dt: f64,
) -> Result<CompartmentState> {
    let n = state.grid.n_x();
    let stage = |base: &CompartmentState,
                 k: &Rhs,
                 scale: f64|
     -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let mut s = vec![0.0; n];
        let mut e = vec![0.0; n];
        let mut i = vec![0.0; n];
        let mut d = vec![0.0; n];
        for idx in 0..n {
            s[idx] = base.s[idx] + scale * k.s[idx];
            e[idx] = base.e[idx] + scale * k.e[idx];
            i[idx] = base.i[idx] + scale * k.i[idx];
            d[idx] = base.d[idx] + scale * k.d[idx];
        }
        (s, e, i, d)
    };

    let k1 = eval_rhs(
        &state.s, &state.e, &state.i, &state.d, density, kernel, params,
    )?;
    let (s2, e2, i2, d2) = stage(state, &k1, 0.5 * dt);
    let k2 = eval_rhs(&s2, &e2, &i2, &d2, density, kernel, params)?;
    let (s3, e3, i3, d3) = stage(state, &k2, 0.5 * dt);
    let k3 = eval_rhs(&s3, &e3, &i3, &d3, density, kernel, params)?;
    let (s4, e4, i4, d4) = stage(state, &k3, dt);
    let k4 = eval_rhs(&s4, &e4, &i4, &d4, density, kernel, params)?;

    let sixth = dt / 6.0;
    let mut next = state.clone();
    next.t = state.t + dt;
    for k in 0..n {
        next.s[k] = state.s[k] + sixth * (k1.s[k] + 2.0 * k2.s[k] + 2.0 * k3.s[k] + k4.s[k]);
        next.e[k] = state.e[k] + sixth * (k1.e[k] + 2.0 * k2.e[k] + 2.0 * k3.e[k] + k4.e[k]);
        next.i[k] = state.i[k] + sixth * (k1.i[k] + 2.0 * k2.i[k] + 2.0 * k3.i[k] + k4.i[k]);
        next.r[k] = state.r[k] + sixth * (k1.r[k] + 2.0 * k2.r[k] + 2.0 * k3.r[k] + k4.r[k]);
        next.d[k] = state.d[k] + sixth * (k1.d[k] + 2.0 * k2.d[k] + 2.0 * k3.d[k] + k4.d[k]);
    }
    if !next.all_finite() {
        return Err(Error::solver(format!(
            "step instability at t = {}: non-finite field; reduce dt",
            next.t
        )));
    }
    let min = next.min_over_fields();
    if min < -1e-8 {
        return Err(Error::solver(format!(
            "step instability at t = {}: negativity {min}; reduce dt",
            next.t
        )));
    }
    Ok(next)
}

/// The initial state: a mollified infected cluster carved out of the
/// susceptible population.
pub fn initial_state(
    density: &DensityProfile,
    params: &EpidemicParams,
) -> Result<CompartmentState> {
    params.validate_against(density)?;
    let grid = density.grid.clone();
    let bump = mollified_indicator(&grid, params.center, params.r0, 2.0 * grid.dx())?;
    let n = grid.n_x();
    let mut s = vec![0.0; n];
    let mut i = vec![0.0; n];
    for k in 0..n {
        i[k] = params.i0 * bump.values[k];
        s[k] = density.values[k] - i[k];
        if s[k] <= 0.0 {
            return Err(Error::config(format!(
                "initial cluster exceeds local population at node {k}"
            )));
        }
    }
    Ok(CompartmentState {
        grid,
        s,
        e: vec![0.0; n],
        i,
        r: vec![0.0; n],
        d: vec![0.0; n],
        t: 0.0,
    })
}

/// One recorded instant of the trajectory.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub t: f64,
    pub s: Vec<f64>,
    pub e: Vec<f64>,
    pub i: Vec<f64>,
    pub r: Vec<f64>,
    pub d: Vec<f64>,
}

/// Space-integrated compartment totals at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aggregate {
    pub t: f64,
    pub s: f64,
    pub e: f64,
    pub i: f64,
    pub r: f64,
    pub d: f64,
}

/// Snapshots plus the aggregate series of one run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub grid: PeriodicGrid,
    pub snapshots: Vec<Snapshot>,
    pub aggregates: Vec<Aggregate>,
}

impl Trajectory {
    fn record(&mut self, state: &CompartmentState) {
        self.snapshots.push(Snapshot {
            t: state.t,
            s: state.s.clone(),
            e: state.e.clone(),
            i: state.i.clone(),
            r: state.r.clone(),
            d: state.d.clone(),
        });
        let g = &state.grid;
        self.aggregates.push(Aggregate {
            t: state.t,
            s: g.integrate(&state.s),
            e: g.integrate(&state.e),
            i: g.integrate(&state.i),
            r: g.integrate(&state.r),
            d: g.integrate(&state.d),
        });
    }

    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory is never empty")
    }
}

/// Build the kernel and initial cluster for `params` and integrate to the
/// horizon.
pub fn simulate(density: &DensityProfile, params: &EpidemicParams) -> Result<Trajectory> {
    let state = initial_state(density, params)?;
    simulate_from(state, density, params)
}

/// Integrate from an explicit initial state, recording a snapshot every
/// `snapshot_every` days (the initial state included).
pub fn simulate_from(
    state: CompartmentState,
    density: &DensityProfile,
    params: &EpidemicParams,
) -> Result<Trajectory> {
    params.validate()?;
    density.check()?;
    if state.grid != density.grid {
        return Err(Error::config("state and density grids differ"));
    }
    let kernel = params.build_kernel(&density.grid)?;
    let steps_per_snap = (params.snapshot_every / params.dt).round() as usize;
    let total_steps = (params.t_end / params.dt).round() as usize;
    let mut trajectory = Trajectory {
        grid: density.grid.clone(),
        snapshots: Vec::new(),
        aggregates: Vec::new(),
    };
    let mut current = state;
    trajectory.record(&current);
    for n in 1..=total_steps {
        current = step(&current, density, &kernel, params, params.dt).map_err(|e| {
            Error::solver(format!("{e} (while advancing past t = {:.4})", current.t))
        })?;
        if n % steps_per_snap == 0 || n == total_steps {
            trajectory.record(&current);
        }
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::torus_distance;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    fn quick_params() -> EpidemicParams {
        EpidemicParams {
            t_end: 2.0,
            ..EpidemicParams::default()
        }
    }

    #[test]
    fn beta_reference_values() {
        assert_eq!(
            beta_of_mu(1.0, BetaMode::DensityDependent, 0.9).unwrap(),
            0.9
        );
        assert_eq!(
            beta_of_mu(0.0, BetaMode::DensityDependent, 0.9).unwrap(),
            0.0
        );
        let b3 = beta_of_mu(3.0, BetaMode::DensityDependent, 0.9).unwrap();
        assert!((b3 - 0.9 * (12.0_f64).sqrt() / (2.0_f64).sqrt()).abs() < 1e-12);
        assert!((b3 - 2.2045).abs() < 1e-4);
        assert_eq!(beta_of_mu(7.3, BetaMode::Constant, 0.9).unwrap(), 0.9);
        assert!(beta_of_mu(-0.1, BetaMode::Constant, 0.9).is_err());
        // increasing in density
        let mut prev = 0.0;
        for k in 1..100 {
            let b = beta_of_mu(k as f64 * 0.1, BetaMode::DensityDependent, 0.9).unwrap();
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn incidence_degenerate_cases() {
        let g = grid(128);
        let density = DensityProfile::uniform(g.clone());
        let params = quick_params();
        let kernel = params.build_kernel(&g).unwrap();
        // no infectious: zero incidence
        let state = CompartmentState::spatially_uniform(g.clone(), 1.0, 0.0);
        let inc = incidence(&state, &density, &kernel, &params).unwrap();
        assert!(inc.values.iter().all(|&v| v == 0.0));
        // no susceptibles: zero incidence
        let mut state = CompartmentState::spatially_uniform(g.clone(), 1.0, 0.0);
        state.r = state.s.clone();
        state.s = vec![0.0; g.n_x()];
        let inc = incidence(&state, &density, &kernel, &params).unwrap();
        assert!(inc.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn incidence_uniform_reduction() {
        // S = 0.99, I = 0.01, mu = 1, constant beta: 0.9 * 0.99 * 0.01
        let g = grid(512);
        let density = DensityProfile::uniform(g.clone());
        let params = quick_params();
        let kernel = params.build_kernel(&g).unwrap();
        let state = CompartmentState::spatially_uniform(g.clone(), 1.0, 0.01);
        let inc = incidence(&state, &density, &kernel, &params).unwrap();
        for &v in &inc.values {
            assert!((v - 0.008910).abs() < 1e-12, "incidence {v}");
        }
    }

    #[test]
    fn incidence_population_exhausted() {
        let g = grid(64);
        let density = DensityProfile::uniform(g.clone());
        let params = quick_params();
        let kernel = params.build_kernel(&g).unwrap();
        let mut state = CompartmentState::spatially_uniform(g.clone(), 1.0, 0.01);
        state.d[3] = 1.0; // kills the whole node
        let err = incidence(&state, &density, &kernel, &params).unwrap_err();
        assert!(err.to_string().contains("population exhausted"), "{err}");
    }

    #[test]
    fn initial_state_cluster_shape() {
        let g = grid(512);
        let density = DensityProfile::uniform(g.clone());
        let params = quick_params();
        let state = initial_state(&density, &params).unwrap();
        let at = |x: f64| state.i[g.nearest_node(x)];
        assert_eq!(at(0.3), 0.01);
        assert_eq!(at(0.8), 0.0);
        assert_eq!(state.s[g.nearest_node(0.3)], 1.0 - 0.01);
        assert_eq!(state.s[g.nearest_node(0.8)], 1.0);
        assert_eq!(state.conservation_error(&density), 0.0);
        // total infected mass equals i0 times the bump mass
        let bump = mollified_indicator(&g, 0.3, 0.1, 2.0 * g.dx()).unwrap();
        let expect = 0.01 * g.integrate(&bump.values);
        assert!((g.integrate(&state.i) - expect).abs() < 1e-15);
    }

    #[test]
    fn initial_cluster_must_fit() {
        let g = grid(64);
        let density = DensityProfile::uniform(g.clone());
        let params = EpidemicParams {
            i0: 1.5,
            ..quick_params()
        };
        let err = initial_state(&density, &params).unwrap_err();
        assert!(err.to_string().contains("initial cluster"), "{err}");
    }

    #[test]
    fn disease_free_state_is_a_fixed_point() {
        let g = grid(128);
        let density = DensityProfile::uniform(g.clone());
        let params = quick_params();
        let kernel = params.build_kernel(&g).unwrap();
        let state = CompartmentState::spatially_uniform(g.clone(), 1.0, 0.0);
        let next = step(&state, &density, &kernel, &params, params.dt).unwrap();
        assert_eq!(next.s, state.s);
        assert_eq!(next.e, state.e);
        assert_eq!(next.i, state.i);
        assert_eq!(next.r, state.r);
        assert_eq!(next.d, state.d);
    }

    #[test]
    fn one_step_depletes_s_only_within_kernel_reach() {
        let g = grid(512);
        let density = DensityProfile::uniform(g.clone());
        let params = quick_params();
        let kernel = params.build_kernel(&g).unwrap();
        let state = initial_state(&density, &params).unwrap();
        let next = step(&state, &density, &kernel, &params, params.dt).unwrap();
        let inc0 = incidence(&state, &density, &kernel, &params).unwrap();
        // stages 3 and 4 of the RK4 step convolve an already-convolved
        // field, so one step reaches two kernel radii past the seed
        let reach = params.r0 + 2.0 * kernel.radius();
        for k in 0..g.n_x() {
            let d = torus_distance(g.node(k), params.center);
            let ds = next.s[k] - state.s[k];
            if d > reach + 1e-12 {
                assert_eq!(ds, 0.0, "S moved outside kernel reach at x = {}", g.node(k));
            }
            if inc0.values[k] > 0.0 {
                assert!(ds < 0.0, "S did not decrease at x = {}", g.node(k));
                // leading-order agreement with the direct right-hand side
                let expect = -params.dt * inc0.values[k];
                assert!(
                    (ds - expect).abs() <= 5e-4 * inc0.values[k].max(1e-12) + 1e-14,
                    "x = {}: ds {ds} vs -dt inc {expect}",
                    g.node(k)
                );
            }
        }
    }

    #[test]
    fn conservation_over_many_steps() {
        let g = grid(128);
        let density = DensityProfile::uniform(g.clone());
        let params = EpidemicParams {
            t_end: 10.0,
            dt: 0.02,
            snapshot_every: 1.0,
            ..EpidemicParams::default()
        };
        let traj = simulate(&density, &params).unwrap();
        for snap in &traj.snapshots {
            for k in 0..g.n_x() {
                let total = snap.s[k] + snap.e[k] + snap.i[k] + snap.r[k] + snap.d[k];
                assert!(
                    (total - 1.0).abs() <= 1e-10,
                    "t = {}, node {k}: drift {}",
                    snap.t,
                    total - 1.0
                );
            }
        }
    }

    #[test]
    fn aggregates_are_monotone() {
        let g = grid(128);
        let density = DensityProfile::uniform(g.clone());
        let params = EpidemicParams {
            t_end: 20.0,
            dt: 0.02,
            snapshot_every: 0.5,
            ..EpidemicParams::default()
        };
        let traj = simulate(&density, &params).unwrap();
        for w in traj.aggregates.windows(2) {
            assert!(w[1].s <= w[0].s + 1e-12, "S increased at t = {}", w[1].t);
            assert!(w[1].r >= w[0].r - 1e-12);
            assert!(w[1].d >= w[0].d - 1e-12);
        }
        // infection actually happened
        assert!(traj.aggregates.last().unwrap().d > 1e-4);
    }

    #[test]
    fn nodewise_monotonicity_of_s_r_d() {
        let g = grid(64);
        let density = DensityProfile::uniform(g.clone());
        let params = EpidemicParams {
            t_end: 15.0,
            dt: 0.02,
            snapshot_every: 0.5,
            ..EpidemicParams::default()
        };
        let traj = simulate(&density, &params).unwrap();
        for w in traj.snapshots.windows(2) {
            for k in 0..g.n_x() {
                assert!(w[1].s[k] <= w[0].s[k] + 1e-12);
                assert!(w[1].r[k] >= w[0].r[k] - 1e-12);
                assert!(w[1].d[k] >= w[0].d[k] - 1e-12);
            }
        }
    }

    #[test]
    fn fast_latency_reduces_to_pass_through() {
        // theta large: the exposed pool is a fast pass-through whose size
        // scales like incidence / theta, so doubling theta halves it
        let g = grid(64);
        let density = DensityProfile::uniform(g.clone());
        let ratio_at = |theta: f64| {
            let params = EpidemicParams {
                theta,
                dt: 0.001,
                t_end: 15.0,
                snapshot_every: 0.25,
                ..EpidemicParams::default()
            };
            let traj = simulate(&density, &params).unwrap();
            let peak_i = traj.aggregates.iter().map(|a| a.i).fold(0.0_f64, f64::max);
            let peak_e = traj.aggregates.iter().map(|a| a.e).fold(0.0_f64, f64::max);
            peak_e / peak_i
        };
        let r25 = ratio_at(25.0);
        let r50 = ratio_at(50.0);
        assert!(
            r50 <= 2.0 * EpidemicParams::default().beta0 / 50.0,
            "ratio {r50}"
        );
        assert!(r50 <= 0.65 * r25, "{r50} vs {r25}");
    }

    #[test]
    fn rotation_equivariance_of_trajectory() {
        let g = grid(128);
        let n = g.n_x();
        let shift = 37usize;
        let params = EpidemicParams {
            t_end: 3.0,
            dt: 0.05,
            snapshot_every: 0.5,
            i0: 0.005,
            ..EpidemicParams::default()
        };
        // structured density, rotated copy
        let mut mu: Vec<f64> = (0..n)
            .map(|k| 1.0 + 0.4 * (2.0 * std::f64::consts::PI * g.node(k)).sin())
            .collect();
        let mass = g.integrate(&mu);
        for v in mu.iter_mut() {
            *v /= mass;
        }
        let mut mu_rot = vec![0.0; n];
        for k in 0..n {
            mu_rot[(k + shift) % n] = mu[k];
        }
        let density = DensityProfile::from_values(g.clone(), mu, DensitySource::File).unwrap();
        let density_rot =
            DensityProfile::from_values(g.clone(), mu_rot, DensitySource::File).unwrap();

        let state = initial_state(&density, &params).unwrap();
        let mut rot = state.clone();
        for k in 0..n {
            let kr = (k + shift) % n;
            rot.s[kr] = state.s[k];
            rot.e[kr] = state.e[k];
            rot.i[kr] = state.i[k];
            rot.r[kr] = state.r[k];
            rot.d[kr] = state.d[k];
        }
        let base = simulate_from(state, &density, &params).unwrap();
        let rotated = simulate_from(rot, &density_rot, &params).unwrap();
        for (a, b) in base.snapshots.iter().zip(rotated.snapshots.iter()) {
            for k in 0..n {
                let kr = (k + shift) % n;
                assert_eq!(a.s[k].to_bits(), b.s[kr].to_bits());
                assert_eq!(a.i[k].to_bits(), b.i[kr].to_bits());
                assert_eq!(a.d[k].to_bits(), b.d[kr].to_bits());
            }
        }
    }

    #[test]
    fn beta_mode_consistency_at_unit_density() {
        // with delta = 0 the living density stays exactly 1, so the two
        // transmission modes produce bit-identical trajectories
        let g = grid(128);
        let density = DensityProfile::uniform(g.clone());
        let mut params = EpidemicParams {
            t_end: 5.0,
            dt: 0.02,
            snapshot_every: 0.5,
            delta: 1e-300, // no deaths: mu - D stays exactly 1
            ..EpidemicParams::default()
        };
        let constant = simulate(&density, &params).unwrap();
        params.beta_mode = BetaMode::DensityDependent;
        let dependent = simulate(&density, &params).unwrap();
        for (a, b) in constant.snapshots.iter().zip(dependent.snapshots.iter()) {
            for k in 0..g.n_x() {
                assert!((a.i[k] - b.i[k]).abs() <= 1e-12);
                assert!((a.s[k] - b.s[k]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn dt_stability_guard() {
        let g = grid(64);
        let density = DensityProfile::uniform(g.clone());
        let params = EpidemicParams {
            dt: 1.0,
            snapshot_every: 1.0,
            theta: 50.0,
            ..EpidemicParams::default()
        };
        let err = params.validate_against(&density).unwrap_err();
        assert!(err.to_string().contains("stability"), "{err}");
    }
}
