//! Gridded fields of the MFG state: value function, population density,
//! optimal controls, and the spatial marginal.

use crate::error::{Error, Result};
use crate::numerics::ExactSum;
use crate::torus::{PeriodicGrid, RectGrid};

/// Value function V(x, h). V(x, 0) = 0 on the capital floor.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueField {
    pub grid: RectGrid,
    pub values: Vec<f64>,
}

impl ValueField {
    pub fn zeros(grid: RectGrid) -> Self {
        let n = grid.len();
        ValueField {
            grid,
            values: vec![0.0; n],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }
}

/// Joint population density mu(x, h) with unit quadrature mass.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityField {
    pub grid: RectGrid,
    pub values: Vec<f64>,
}

impl DensityField {
    /// The uniform product density, normalized to unit mass.
    pub fn uniform(grid: RectGrid) -> Self {
        let n = grid.len();
        let mut field = DensityField {
            grid,
            values: vec![1.0; n],
        };
        field.normalize();
        field
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    /// Quadrature mass (trapezoid in h, rectangle in x).
    pub fn mass(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// Rescale to unit mass.
    pub fn normalize(&mut self) {
        let m = self.mass();
        if m > 0.0 {
            for v in self.values.iter_mut() {
                *v /= m;
            }
        }
    }

    /// Verify nonnegativity (to `neg_tol`) and unit mass (to `mass_tol`).
    pub fn check_probability(&self, neg_tol: f64, mass_tol: f64) -> Result<()> {
        let min = crate::numerics::min_value(&self.values);
        if min < -neg_tol {
            return Err(Error::solver(format!(
                "density has negative entries down to {min}"
            )));
        }
        let mass = self.mass();
        if (mass - 1.0).abs() > mass_tol {
            return Err(Error::solver(format!("density mass {mass} is not 1")));
        }
        Ok(())
    }

    /// Marginal in x: `mu_x[i] = sum_j mu[i, j] w_j dh`, with the same
    /// h-boundary half weights as the 2-D quadrature.
    pub fn x_marginal(&self) -> SpatialDensity {
        let nx = self.grid.n_x();
        let nh = self.grid.n_h();
        let dh = self.grid.dh();
        let mut values = vec![0.0; nx];
        for (i, out) in values.iter_mut().enumerate() {
            let mut acc = ExactSum::new();
            for j in 0..nh {
                acc.add(self.values[self.grid.idx(i, j)] * self.grid.h_weight(j));
            }
            *out = acc.value() * dh;
        }
        SpatialDensity {
            grid: self.grid.spatial.clone(),
            values,
        }
    }

    /// Marginal in h: sum_i mu[i, j] dx per capital level.
    pub fn h_marginal(&self) -> Vec<f64> {
        let nx = self.grid.n_x();
        let nh = self.grid.n_h();
        let dx = self.grid.dx();
        (0..nh)
            .map(|j| {
                let mut acc = ExactSum::new();
                for i in 0..nx {
                    acc.add(self.values[self.grid.idx(i, j)]);
                }
                acc.value() * dx
            })
            .collect()
    }

    /// Mass in the band h >= `h_from` (quadrature weights included).
    pub fn mass_above(&self, h_from: f64) -> f64 {
        let mut acc = ExactSum::new();
        for i in 0..self.grid.n_x() {
            for j in 0..self.grid.n_h() {
                if self.grid.h_node(j) >= h_from {
                    acc.add(self.values[self.grid.idx(i, j)] * self.grid.h_weight(j));
                }
            }
        }
        acc.value() * self.grid.dx() * self.grid.dh()
    }
}

/// Optimal controls at every node: movement velocity and investment rate.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyField {
    pub grid: RectGrid,
    pub v_star: Vec<f64>,
    pub f_star: Vec<f64>,
}

impl PolicyField {
    pub fn zeros(grid: RectGrid) -> Self {
        let n = grid.len();
        PolicyField {
            grid,
            v_star: vec![0.0; n],
            f_star: vec![0.0; n],
        }
    }

    /// Check the control bounds |v| <= v_max and f in [0, 1].
    pub fn check_bounds(&self, v_max: f64) -> Result<()> {
        for (k, &v) in self.v_star.iter().enumerate() {
            if !(v.abs() <= v_max * (1.0 + 1e-12)) {
                return Err(Error::solver(format!(
                    "velocity {v} at node {k} exceeds bound"
                )));
            }
        }
        for (k, &f) in self.f_star.iter().enumerate() {
            if !((-1e-12..=1.0 + 1e-12).contains(&f)) {
                return Err(Error::solver(format!(
                    "investment {f} at node {k} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Spatial density on the torus with unit mass.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialDensity {
    pub grid: PeriodicGrid,
    pub values: Vec<f64>,
}

impl SpatialDensity {
    pub fn uniform(grid: PeriodicGrid) -> Self {
        let n = grid.n_x();
        SpatialDensity {
            grid,
            values: vec![1.0; n],
        }
    }

    pub fn mass(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// Periodic linear interpolation onto a finer (or coarser) torus grid,
    /// renormalized so the mass stays exactly 1.
    pub fn resample(&self, n_target: usize) -> Result<SpatialDensity> {
        let target = PeriodicGrid::new(n_target)?;
        if n_target == self.grid.n_x() {
            return Ok(self.clone());
        }
        let n_src = self.grid.n_x();
        let values: Vec<f64> = (0..n_target)
            .map(|i| {
                let pos = target.node(i) * n_src as f64;
                let base = pos.floor() as usize % n_src;
                let t = pos - pos.floor();
                let next = (base + 1) % n_src;
                (1.0 - t) * self.values[base] + t * self.values[next]
            })
            .collect();
        let mut out = SpatialDensity {
            grid: target,
            values,
        };
        let m = out.mass();
        if !(m > 0.0) {
            return Err(Error::solver("resampled density has nonpositive mass"));
        }
        for v in out.values.iter_mut() {
            *v /= m;
        }
        Ok(out)
    }
}
