//! Exactly rounded summation of `f64` sequences.
//!
//! [`ExactSum`] accumulates doubles into a wide fixed-point register (one
//! 32-bit limb per 32 bits of the full binary64 exponent range), so the
//! accumulated value is the *exact* real sum of the inputs. [`ExactSum::value`]
//! rounds that exact value to the nearest double (ties to even, with a sticky
//! bit for the discarded tail). Two consequences the solvers rely on:
//!
//! * the result is independent of the order in which values are added, so
//!   reductions commute with grid rotations bit-for-bit;
//! * repeated runs produce identical bits.
//!
//! Inputs must be finite. The register covers the whole finite f64 range, so
//! no intermediate can overflow for fewer than 2^30 additions.

/// Number of 32-bit limbs covering binary64 exponents, plus carry headroom.
const LIMBS: usize = 70;

/// Fixed-point accumulator holding an exact sum of doubles.
#[derive(Clone)]
pub struct ExactSum {
    /// limb[k] weights 2^(32k - 1074).
    limbs: [i64; LIMBS],
    pending: u32,
}

impl Default for ExactSum {
    fn default() -> Self {
        Self::new()
    }
}

impl ExactSum {
    pub fn new() -> Self {
        ExactSum {
            limbs: [0; LIMBS],
            pending: 0,
        }
    }

    /// Add one finite double to the accumulator.
    pub fn add(&mut self, value: f64) {
        debug_assert!(value.is_finite(), "ExactSum::add requires finite input");
        if value == 0.0 {
            return;
        }
        let bits = value.to_bits();
        let neg = (bits >> 63) != 0;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0x000f_ffff_ffff_ffff;
        // value = m * 2^(p - 1074), m < 2^53
        let (m, p) = if biased == 0 {
            (frac, 0i64)
        } else {
            (frac | (1u64 << 52), biased - 1)
        };
        let limb = (p / 32) as usize;
        let shift = (p % 32) as u32;
        let wide = (m as u128) << shift; // < 2^84
        let c0 = (wide & 0xffff_ffff) as i64;
        let c1 = ((wide >> 32) & 0xffff_ffff) as i64;
        let c2 = ((wide >> 64) & 0xffff_ffff) as i64;
        if neg {
            self.limbs[limb] -= c0;
            self.limbs[limb + 1] -= c1;
            self.limbs[limb + 2] -= c2;
        } else {
            self.limbs[limb] += c0;
            self.limbs[limb + 1] += c1;
            self.limbs[limb + 2] += c2;
        }
        self.pending += 1;
        if self.pending >= (1 << 30) {
            self.carry_normalize();
        }
    }

    /// Propagate carries so every limb except the topmost lies in [0, 2^32).
    /// The topmost limb stays signed; it is negative exactly when the total
    /// is negative.
    fn carry_normalize(&mut self) {
        let mut carry = 0i64;
        for k in 0..LIMBS - 1 {
            let v = self.limbs[k] + carry;
            carry = v >> 32; // arithmetic shift: floor division by 2^32
            self.limbs[k] = v - (carry << 32);
        }
        self.limbs[LIMBS - 1] += carry;
        self.pending = 0;
    }

    /// Round the exact accumulated value to the nearest double.
    pub fn value(&self) -> f64 {
        let mut norm = self.clone();
        norm.carry_normalize();
        // Determine sign: after normalization all limbs are in [0, 2^32)
        // except the top run, which carries the sign of the total.
        let mut top = None;
        for k in (0..LIMBS).rev() {
            if norm.limbs[k] != 0 {
                top = Some(k);
                break;
            }
        }
        let Some(mut top) = top else {
            return 0.0;
        };
        let negative = norm.limbs[top] < 0;
        if negative {
            for limb in norm.limbs.iter_mut() {
                *limb = -*limb;
            }
            norm.carry_normalize();
            while top > 0 && norm.limbs[top] == 0 {
                top -= 1;
            }
        }
        // Window of the top three limbs holds >= 64 significant bits,
        // more than enough for a 53-bit mantissa plus round/guard bits.
        let lo = top.saturating_sub(2);
        let mut window: u128 = 0;
        for k in (lo..=top).rev() {
            window = (window << 32) | (norm.limbs[k] as u128);
        }
        let mut sticky = false;
        for k in 0..lo {
            if norm.limbs[k] != 0 {
                sticky = true;
                break;
            }
        }
        if sticky {
            window |= 1;
        }
        let magnitude = (window as f64) * pow2(32 * lo as i32 - 1074);
        if negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// 2^e as f64, exact for every in-range exponent.
fn pow2(e: i32) -> f64 {
    debug_assert!((-1074..=1023).contains(&e));
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        // subnormal scale: split to stay exact
        f64::from_bits(1u64 << (e + 1074))
    }
}

/// Exactly rounded sum of a slice.
pub fn sum(values: &[f64]) -> f64 {
    let mut acc = ExactSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// Exactly rounded dot product. Each product is split into its rounded value
/// and the fma-recovered error so the accumulated quantity is exact.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut acc = ExactSum::new();
    for (&x, &y) in a.iter().zip(b.iter()) {
        let p = x * y;
        let err = x.mul_add(y, -p);
        acc.add(p);
        acc.add(err);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_is_exact() {
        assert_eq!(sum(&[1e100, 1.0, -1e100]), 1.0);
        assert_eq!(sum(&[1e-300, 1e300, -1e300, 1e-300]), 2e-300);
    }

    #[test]
    fn permutation_invariant() {
        let xs = [0.1, -0.3, 1e16, 7.5e-12, -1e16, 0.2, 3.25, -1e-30];
        let mut perm = xs;
        perm.reverse();
        assert_eq!(sum(&xs), sum(&perm));
        let mut rolled = xs;
        rolled.rotate_left(3);
        assert_eq!(sum(&xs), sum(&rolled));
    }

    #[test]
    fn matches_naive_on_benign_input() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64) * 0.5).collect();
        let naive: f64 = xs.iter().sum();
        assert_eq!(sum(&xs), naive); // exactly representable partial sums
    }

    #[test]
    fn rounding_is_to_nearest() {
        // 1 + 2^-53 rounds to 1 (tie to even), 1 + 2^-53 + 2^-100 rounds up.
        let tie = sum(&[1.0, f64::EPSILON / 2.0]);
        assert_eq!(tie, 1.0);
        let above = sum(&[1.0, f64::EPSILON / 2.0, 1e-60]);
        assert_eq!(above, 1.0 + f64::EPSILON);
    }

    #[test]
    fn negative_totals() {
        assert_eq!(sum(&[1.0, -3.0]), -2.0);
        assert_eq!(sum(&[-1e-320, -1e-320]), -2e-320);
    }

    #[test]
    fn dot_recovers_product_errors() {
        // 0.1 * 0.1 is inexact; dot of [0.1;10] with [0.1;10] is exactly
        // the rounded value of 10 * (0.1*0.1 exact).
        let a = [0.1; 10];
        let q = dot(&a, &a);
        // reference via integer-ish check: |q - 0.1| within one ulp and
        // permutation invariant by construction
        assert!((q - 0.01 * 10.0).abs() < 1e-16);
        let b = [2.0_f64.powi(500); 4];
        let c = [2.0_f64.powi(500); 4];
        assert_eq!(dot(&b, &c), 4.0 * 2.0_f64.powi(1000));
    }

    #[test]
    fn subnormal_inputs() {
        let tiny = f64::from_bits(1); // smallest subnormal
        assert_eq!(sum(&[tiny, tiny]), 2.0 * tiny);
        assert_eq!(sum(&[tiny, -tiny]), 0.0);
    }

    #[test]
    fn pow2_extremes() {
        assert_eq!(pow2(0), 1.0);
        assert_eq!(pow2(-1074), f64::from_bits(1));
        assert_eq!(pow2(1023), 2.0_f64.powi(1023));
    }
}
