//! Periodic spatial discretization of the unit torus, kernel construction,
//! and convolution quadrature.
//!
//! The torus has length 1 and is sampled at `n_x` equispaced nodes
//! `x_i = i / n_x`; index arithmetic is modulo `n_x`, and node coordinates
//! are computed as the exact division `i / n_x` so the wrap point coincides
//! with 0 in floating point. Kernels are stored as sampled profiles anchored
//! at node 0 and built half-then-mirrored, so their symmetry under
//! `x -> -x (mod 1)` is exact. Convolutions iterate over kernel offsets in a
//! fixed order, which makes them equivariant under rotation of the input at
//! the index level: shifting the input by k nodes shifts the output by k
//! nodes, bit for bit.

use crate::error::{Error, Result};

mod kernel;

pub use kernel::{build_infection_kernel, eta_profile, mollified_indicator, KernelProfile};

/// Uniform periodic grid on the unit torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicGrid {
    n_x: usize,
}

impl PeriodicGrid {
    /// A torus grid with `n_x` nodes. Requires `n_x >= 8`.
    pub fn new(n_x: usize) -> Result<Self> {
        if n_x < 8 {
            return Err(Error::config(format!(
                "grid size n_x = {n_x} below the minimum of 8"
            )));
        }
        Ok(PeriodicGrid { n_x })
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    /// Node spacing 1 / n_x.
    pub fn dx(&self) -> f64 {
        1.0 / self.n_x as f64
    }

    /// Coordinate of node `i` (indices taken modulo n_x).
    pub fn node(&self, i: usize) -> f64 {
        ((i % self.n_x) as f64) / (self.n_x as f64)
    }

    /// Index arithmetic modulo n_x for signed offsets.
    pub fn wrap(&self, i: usize, offset: isize) -> usize {
        let n = self.n_x as isize;
        let j = (i as isize + offset).rem_euclid(n);
        j as usize
    }

    /// Nearest node to a position (positions reduced mod 1).
    pub fn nearest_node(&self, x: f64) -> usize {
        let xr = x.rem_euclid(1.0);
        let i = (xr * self.n_x as f64).round() as usize;
        i % self.n_x
    }

    /// Quadrature of nodal values: sum * dx (rectangle rule, which on a
    /// periodic grid coincides with the trapezoid rule).
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_x);
        crate::numerics::sum(values) * self.dx()
    }
}

/// Tensor grid on the torus times the truncated capital interval [0, h_max].
#[derive(Clone, Debug, PartialEq)]
pub struct RectGrid {
    pub spatial: PeriodicGrid,
    n_h: usize,
    h_max: f64,
}

impl RectGrid {
    pub fn new(spatial: PeriodicGrid, n_h: usize, h_max: f64) -> Result<Self> {
        if n_h < 8 {
            return Err(Error::config(format!(
                "grid size n_h = {n_h} below the minimum of 8"
            )));
        }
        if !(h_max > 0.0) {
            return Err(Error::config(format!("h_max = {h_max} must be positive")));
        }
        Ok(RectGrid {
            spatial,
            n_h,
            h_max,
        })
    }

    pub fn n_x(&self) -> usize {
        self.spatial.n_x()
    }

    pub fn n_h(&self) -> usize {
        self.n_h
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn dx(&self) -> f64 {
        self.spatial.dx()
    }

    /// Spacing of the capital grid: h_max / (n_h - 1), so h_0 = 0 and
    /// h_{n_h-1} = h_max.
    pub fn dh(&self) -> f64 {
        self.h_max / (self.n_h - 1) as f64
    }

    pub fn h_node(&self, j: usize) -> f64 {
        debug_assert!(j < self.n_h);
        if j == self.n_h - 1 {
            self.h_max
        } else {
            j as f64 * self.dh()
        }
    }

    /// Flat index of node (i, j), x-major.
    pub fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n_x() && j < self.n_h);
        i * self.n_h + j
    }

    pub fn len(&self) -> usize {
        self.n_x() * self.n_h
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Trapezoid weight in h for row j (half weight at both ends).
    pub fn h_weight(&self, j: usize) -> f64 {
        if j == 0 || j == self.n_h - 1 {
            0.5
        } else {
            1.0
        }
    }

    /// 2-D quadrature of nodal values: trapezoid in h, rectangle in x.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        let mut acc = crate::numerics::ExactSum::new();
        for i in 0..self.n_x() {
            for j in 0..self.n_h {
                acc.add(values[self.idx(i, j)] * self.h_weight(j));
            }
        }
        acc.value() * self.dx() * self.dh()
    }
}

/// Nodal values of a scalar function on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub grid: PeriodicGrid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_x() {
            return Err(Error::config(format!(
                "field length {} does not match grid size {}",
                values.len(),
                grid.n_x()
            )));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn constant(grid: PeriodicGrid, value: f64) -> Self {
        let n = grid.n_x();
        ScalarField {
            grid,
            values: vec![value; n],
        }
    }

    /// Sample a function of position at every node.
    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n_x()).map(|i| f(grid.node(i))).collect();
        ScalarField { grid, values }
    }
}

/// Arc-length distance on the torus; inputs are reduced mod 1.
pub fn torus_distance(x: f64, y: f64) -> f64 {
    let a = (x - y).rem_euclid(1.0);
    let b = (y - x).rem_euclid(1.0);
    a.min(b)
}

/// Piecewise-linear interaction weight: 1 on [0, eps1], `eps2` on
/// [1/2 - eps3, 1/2], linear in between. Lipschitz and nonincreasing.
pub fn eta_weight(d: f64, eps1: f64, eps2: f64, eps3: f64) -> f64 {
    debug_assert!((0.0..=0.5 + 1e-12).contains(&d));
    let knee = 0.5 - eps3;
    if d <= eps1 {
        1.0
    } else if d >= knee {
        eps2
    } else {
        let t = (d - eps1) / (knee - eps1);
        1.0 + t * (eps2 - 1.0)
    }
}

/// Check the eta parameter preconditions; reported before any solve.
pub fn validate_eta_params(eps1: f64, eps2: f64, eps3: f64) -> Result<()> {
    if !(eps1 > 0.0 && eps1 < 0.5) {
        return Err(Error::config(format!(
            "eta.eps1 = {eps1} violates 0 < eps1 < 1/2"
        )));
    }
    if !(eps2 > 0.0 && eps2 < 1.0) {
        return Err(Error::config(format!(
            "eta.eps2 = {eps2} violates 0 < eps2 < 1"
        )));
    }
    if !(eps3 > 0.0 && 0.5 - eps3 > eps1) {
        return Err(Error::config(format!(
            "eta.eps3 = {eps3} violates 1/2 - eps3 > eps1 = {eps1}"
        )));
    }
    Ok(())
}

/// Periodic convolution quadrature: `out[i] = sum_s kernel[s] field[i-s] dx`.
///
/// The sum runs over the kernel's support offsets in a fixed order anchored
/// to the kernel, so rotating the input field rotates the output exactly.
pub fn periodic_convolve(kernel: &KernelProfile, field: &ScalarField) -> Result<ScalarField> {
    if kernel.grid() != &field.grid {
        return Err(Error::config(
            "kernel and field are sampled on different grids",
        ));
    }
    let grid = field.grid.clone();
    let n = grid.n_x();
    let dx = grid.dx();
    let offsets = kernel.support_offsets();
    let mut values = vec![0.0; n];
    for (i, out) in values.iter_mut().enumerate() {
        let mut acc = 0.0;
        for &(s, w) in offsets {
            let j = grid.wrap(i, -s);
            acc += w * field.values[j];
        }
        *out = acc * dx;
    }
    Ok(ScalarField { grid, values })
}
