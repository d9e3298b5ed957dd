//! Shared numerical infrastructure: exact summation, sparse matrices,
//! and a Krylov solver.
//!
//! Reductions (sums, dot products) everywhere in the solvers go through
//! [`exact`], which computes the correctly rounded value of the exact real
//! sum. That makes every reduction independent of summation order, which in
//! turn makes the solvers bit-for-bit equivariant under grid rotations and
//! deterministic across runs.

pub mod exact;
pub mod solver;
pub mod sparse;

pub use exact::{dot, sum, ExactSum};
pub use solver::{bicgstab, SolveOutcome};
pub use sparse::Csr;

/// Sup norm of a slice.
pub fn sup_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Largest entry (signed).
pub fn max_value(values: &[f64]) -> f64 {
    values.iter().fold(f64::NEG_INFINITY, |acc, &v| acc.max(v))
}

/// Smallest entry (signed).
pub fn min_value(values: &[f64]) -> f64 {
    values.iter().fold(f64::INFINITY, |acc, &v| acc.min(v))
}

/// Index of the largest entry (first occurrence).
pub fn argmax(values: &[f64]) -> usize {
    let mut idx = 0;
    let mut max = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > max {
            max = v;
            idx = i;
        }
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_norm_basic() {
        assert_eq!(sup_norm(&[1.0, -3.0, 2.0]), 3.0);
        assert_eq!(sup_norm(&[]), 0.0);
    }

    #[test]
    fn argmax_first_occurrence() {
        assert_eq!(argmax(&[0.0, 5.0, 5.0, 1.0]), 1);
    }
}
