//! Sampled kernels on the torus: the rescaled infection kernel, the
//! interaction weight profile, and mollified indicators.

use super::{eta_weight, torus_distance, PeriodicGrid, ScalarField};
use crate::error::{Error, Result};

/// A nonnegative, symmetric kernel sampled at the torus nodes.
///
/// `support_offsets` lists the kernel values by signed node offset in a
/// fixed ascending order; convolutions iterate over it so their output is
/// exactly rotation-equivariant.
#[derive(Clone, Debug)]
pub struct KernelProfile {
    grid: PeriodicGrid,
    samples: Vec<f64>,
    radius: f64,
    mass: f64,
    offsets: Vec<(isize, f64)>,
}

impl KernelProfile {
    /// Wrap validated samples. `radius` is the support half-width in torus
    /// distance units; samples beyond it must vanish.
    pub fn from_samples(grid: PeriodicGrid, samples: Vec<f64>, radius: f64) -> Result<Self> {
        let n = grid.n_x();
        if samples.len() != n {
            return Err(Error::config(format!(
                "kernel sample count {} does not match grid size {n}",
                samples.len()
            )));
        }
        for (i, &v) in samples.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(Error::config(format!(
                    "kernel sample {i} = {v} is negative or NaN"
                )));
            }
            let mirrored = samples[(n - i) % n];
            if v.to_bits() != mirrored.to_bits() {
                return Err(Error::config(format!(
                    "kernel samples are not symmetric at node {i}"
                )));
            }
            if torus_distance(grid.node(i), 0.0) > radius && v != 0.0 {
                return Err(Error::config(format!(
                    "kernel sample {i} = {v} outside the stated radius {radius}"
                )));
            }
        }
        let mass = grid.integrate(&samples);
        let offsets = collect_offsets(&grid, &samples, radius);
        Ok(KernelProfile {
            grid,
            samples,
            radius,
            mass,
            offsets,
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Quadrature mass of the sampled kernel.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn support_offsets(&self) -> &[(isize, f64)] {
        &self.offsets
    }

    /// Number of strictly positive samples.
    pub fn support_count(&self) -> usize {
        self.samples.iter().filter(|&&v| v > 0.0).count()
    }

    /// Sample value by signed node offset from the kernel center.
    pub fn sample_at_offset(&self, s: isize) -> f64 {
        self.samples[self.grid.wrap(0, s)]
    }
}

/// All offsets within the support radius, ascending. Every torus residue is
/// covered exactly once when the radius spans the whole torus.
fn collect_offsets(grid: &PeriodicGrid, samples: &[f64], radius: f64) -> Vec<(isize, f64)> {
    let n = grid.n_x() as isize;
    let dx = grid.dx();
    let bound = (radius / dx).ceil() as isize + 1;
    let (lo, hi) = if bound >= n / 2 {
        (-(n / 2), n - 1 - n / 2)
    } else {
        (-bound, bound)
    };
    let mut out = Vec::new();
    for s in lo..=hi {
        out.push((s, samples[grid.wrap(0, s)]));
    }
    out
}

/// Smoothed hat kernel rescaled to support half-width `chi` and unit mass.
///
/// The hat profile `max(0, 1 - |x| / chi) / chi` is sampled at the nodes,
/// smoothed by a short cosine-bump average of half-width `moll_width`, and
/// renormalized so its quadrature mass is exactly 1 regardless of `chi`.
pub fn build_infection_kernel(
    grid: &PeriodicGrid,
    chi: f64,
    moll_width: f64,
) -> Result<KernelProfile> {
    let dx = grid.dx();
    if !(chi > 0.0 && chi < 0.5) {
        return Err(Error::config(format!(
            "kernel radius chi = {chi} violates 0 < chi < 1/2"
        )));
    }
    if chi < 2.0 * dx {
        return Err(Error::config(format!(
            "kernel under-resolved: chi = {chi} is below 2 dx = {}",
            2.0 * dx
        )));
    }
    if !(moll_width >= 0.0 && moll_width < chi) {
        return Err(Error::config(format!(
            "mollification width {moll_width} must lie in [0, chi = {chi})"
        )));
    }
    let n = grid.n_x();
    let m = (moll_width / dx).round() as isize;
    let radius = chi + m as f64 * dx;
    if radius >= 0.5 {
        return Err(Error::config(format!(
            "kernel support {radius} is not a strict subset of the torus"
        )));
    }

    let raw = sample_symmetric(grid, |d| {
        let t = d / chi;
        (1.0 - t).max(0.0) / chi
    });

    // Discrete mollification by a normalized cosine bump.
    let mut weights = Vec::with_capacity((2 * m + 1) as usize);
    for s in -m..=m {
        let w = 0.5 * (1.0 + (std::f64::consts::PI * s as f64 / (m as f64 + 1.0)).cos());
        weights.push(w);
    }
    let wsum: f64 = crate::numerics::sum(&weights);
    let mut smoothed = vec![0.0; n];
    for i in 0..=n / 2 {
        let mut acc = 0.0;
        for (k, s) in (-m..=m).enumerate() {
            acc += weights[k] * raw[grid.wrap(i, -s)];
        }
        let v = acc / wsum;
        smoothed[i] = v;
        smoothed[(n - i) % n] = v;
    }

    let mass = grid.integrate(&smoothed);
    for v in smoothed.iter_mut() {
        *v /= mass;
    }
    KernelProfile::from_samples(grid.clone(), smoothed, radius)
}

/// The interaction weight eta sampled as a kernel profile over the whole
/// torus (its floor keeps it positive everywhere, so the support is global).
pub fn eta_profile(grid: &PeriodicGrid, eps1: f64, eps2: f64, eps3: f64) -> Result<KernelProfile> {
    super::validate_eta_params(eps1, eps2, eps3)?;
    let samples = sample_symmetric(grid, |d| eta_weight(d, eps1, eps2, eps3));
    KernelProfile::from_samples(grid.clone(), samples, 0.5)
}

/// Smooth bump equal to 1 within torus distance `r - moll_width` of
/// `center`, 0 beyond distance `r`, cosine ramp in between.
pub fn mollified_indicator(
    grid: &PeriodicGrid,
    center: f64,
    r: f64,
    moll_width: f64,
) -> Result<ScalarField> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::config(format!(
            "indicator radius r = {r} violates 0 < r < 1/2"
        )));
    }
    if !(moll_width > 0.0 && moll_width < r) {
        return Err(Error::config(format!(
            "indicator mollification width {moll_width} must lie in (0, r = {r})"
        )));
    }
    let values = (0..grid.n_x())
        .map(|i| {
            let d = torus_distance(grid.node(i), center);
            indicator_ramp(d, r, moll_width)
        })
        .collect();
    ScalarField::new(grid.clone(), values)
}

fn indicator_ramp(d: f64, r: f64, w: f64) -> f64 {
    if d <= r - w {
        1.0
    } else if d >= r {
        0.0
    } else {
        0.5 * (1.0 + (std::f64::consts::PI * (d - (r - w)) / w).cos())
    }
}

/// Sample a function of torus distance to node 0, mirroring the first half
/// so the symmetry x -> -x holds bit-for-bit.
fn sample_symmetric(grid: &PeriodicGrid, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = grid.n_x();
    let mut out = vec![0.0; n];
    for i in 0..=n / 2 {
        let v = f(torus_distance(grid.node(i), 0.0));
        out[i] = v;
        out[(n - i) % n] = v;
    }
    out
}
