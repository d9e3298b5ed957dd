//! The interaction average F: the eta-weighted mean capital level seen from
//! each position.
//!
//! F(x) = int eta(d(x,y)) k dmu(y,k) / int eta(d(x,y)) dmu(y,k). Both
//! integrals reduce to periodic convolutions of the eta profile with the
//! density's x-marginal moments, so they share the convolution quadrature
//! (and its exact rotation equivariance) with the epidemic kernel.

use super::fields::DensityField;
use crate::error::{Error, Result};
use crate::numerics::ExactSum;
use crate::torus::{periodic_convolve, KernelProfile, ScalarField};

/// Denominator floor below which the interaction neighborhood is reported
/// empty. Unreachable when the eta floor is positive and the density has
/// unit mass.
const DEN_FLOOR: f64 = 1e-14;

/// F at every torus node for the given density and eta profile.
pub fn interaction_f(density: &DensityField, eta: &KernelProfile) -> Result<Vec<f64>> {
    let grid = &density.grid;
    let nx = grid.n_x();
    let nh = grid.n_h();
    let dh = grid.dh();
    let mut mass_x = vec![0.0; nx];
    let mut moment_x = vec![0.0; nx];
    for i in 0..nx {
        let mut m0 = ExactSum::new();
        let mut m1 = ExactSum::new();
        for j in 0..nh {
            let w = density.values[grid.idx(i, j)] * grid.h_weight(j);
            m0.add(w);
            m1.add(w * grid.h_node(j));
        }
        mass_x[i] = m0.value() * dh;
        moment_x[i] = m1.value() * dh;
    }
    let spatial = grid.spatial.clone();
    let den = periodic_convolve(eta, &ScalarField::new(spatial.clone(), mass_x)?)?;
    let num = periodic_convolve(eta, &ScalarField::new(spatial, moment_x)?)?;
    let mut out = Vec::with_capacity(nx);
    for i in 0..nx {
        if den.values[i] < DEN_FLOOR {
            return Err(Error::solver(format!(
                "empty interaction neighborhood at node {i}: weighted mass {}",
                den.values[i]
            )));
        }
        out.push(num.values[i] / den.values[i]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{eta_profile, PeriodicGrid, RectGrid};

    fn setup(nx: usize, nh: usize, h_max: f64) -> (RectGrid, KernelProfile) {
        let grid = RectGrid::new(PeriodicGrid::new(nx).unwrap(), nh, h_max).unwrap();
        let eta = eta_profile(&grid.spatial, 0.3, 1e-3, 0.1).unwrap();
        (grid, eta)
    }

    #[test]
    fn concentrated_level_returns_that_level() {
        // all mass at a single capital level: the weighted mean is that level
        let (grid, eta) = setup(32, 24, 10.0);
        let j0 = 7;
        let mut values = vec![0.0; grid.len()];
        for i in 0..32 {
            // arbitrary x profile
            values[grid.idx(i, j0)] = 1.0 + (i as f64 * 0.37).sin().abs();
        }
        let mut density = DensityField {
            grid: grid.clone(),
            values,
        };
        density.normalize();
        let f = interaction_f(&density, &eta).unwrap();
        let level = grid.h_node(j0);
        for (i, &v) in f.iter().enumerate() {
            assert!((v - level).abs() < 1e-10, "node {i}: {v} vs {level}");
        }
    }

    #[test]
    fn x_uniform_product_density_gives_constant_mean() {
        let (grid, eta) = setup(32, 24, 10.0);
        let mut values = vec![0.0; grid.len()];
        for i in 0..32 {
            for j in 0..24 {
                values[grid.idx(i, j)] = (-(0.4) * grid.h_node(j)).exp();
            }
        }
        let mut density = DensityField {
            grid: grid.clone(),
            values,
        };
        density.normalize();
        let f = interaction_f(&density, &eta).unwrap();
        // direct quadrature of int k mu2(k) dk / int mu2(k) dk
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..24 {
            let w = grid.h_weight(j) * (-(0.4) * grid.h_node(j)).exp();
            num += w * grid.h_node(j);
            den += w;
        }
        let expect = num / den;
        for (i, &v) in f.iter().enumerate() {
            assert!((v - expect).abs() < 1e-10, "node {i}: {v} vs {expect}");
        }
    }

    #[test]
    fn capital_rescaling_scales_f() {
        // mu_c(x, h) = mu(x, h/c)/c on a stretched grid scales F by c
        let c = 2.5;
        let (grid, eta) = setup(24, 40, 8.0);
        let stretched = RectGrid::new(grid.spatial.clone(), 40, 8.0 * c).unwrap();
        let profile = |x: f64, h: f64| {
            (1.0 + (2.0 * std::f64::consts::PI * x).cos().powi(2)) * (-0.7 * h).exp()
        };
        let mut base_vals = vec![0.0; grid.len()];
        let mut stretch_vals = vec![0.0; stretched.len()];
        for i in 0..24 {
            for j in 0..40 {
                base_vals[grid.idx(i, j)] = profile(grid.spatial.node(i), grid.h_node(j));
                stretch_vals[stretched.idx(i, j)] =
                    profile(stretched.spatial.node(i), stretched.h_node(j) / c) / c;
            }
        }
        let mut base = DensityField {
            grid,
            values: base_vals,
        };
        let mut stretch = DensityField {
            grid: stretched,
            values: stretch_vals,
        };
        base.normalize();
        stretch.normalize();
        let f_base = interaction_f(&base, &eta).unwrap();
        let f_stretch = interaction_f(&stretch, &eta).unwrap();
        for i in 0..24 {
            assert!(
                (f_stretch[i] - c * f_base[i]).abs() < 1e-9 * (1.0 + c * f_base[i]),
                "node {i}: {} vs {}",
                f_stretch[i],
                c * f_base[i]
            );
        }
    }
}
