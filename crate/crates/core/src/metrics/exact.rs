//! Order-independent summation of nonnegative doubles.
//!
//! Each value is split into 32-bit limbs of a fixed-point integer spanning
//! the whole finite `f64` range, so sums are exact and merging partial sums
//! in any grouping yields the same bits.

const LIMB_BITS: u32 = 32;
const LIMB_MASK: i64 = (1 << LIMB_BITS) - 1;
/// 2045 exponent positions + 53 mantissa bits + carry headroom.
const LIMBS: usize = 70;
/// Unnormalized additions allowed before carries must be propagated.
const MAX_PENDING: u32 = 1 << 29;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactSum {
    limbs: [i64; LIMBS],
    pending: u32,
}

impl Default for ExactSum {
    fn default() -> Self {
        Self {
            limbs: [0; LIMBS],
            pending: 0,
        }
    }
}

impl std::fmt::Debug for ExactSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ExactSum({:e})", self.value())
    }
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a finite, nonnegative value.
    pub fn add(&mut self, x: f64) {
        assert!(x.is_finite() && x >= 0.0, "ExactSum takes finite nonnegative values, got {x}");
        if x == 0.0 {
            return;
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as u32;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, shift) = if biased == 0 {
            (frac, 0)
        } else {
            (frac | (1u64 << 52), biased - 1)
        };
        let limb = (shift / LIMB_BITS) as usize;
        let wide = (mant as u128) << (shift % LIMB_BITS);
        self.limbs[limb] += (wide as i64) & LIMB_MASK;
        self.limbs[limb + 1] += ((wide >> 32) as i64) & LIMB_MASK;
        self.limbs[limb + 2] += (wide >> 64) as i64;
        self.pending += 1;
        if self.pending >= MAX_PENDING {
            self.normalize();
        }
    }

    pub fn merge(&mut self, other: &ExactSum) {
        self.normalize();
        let mut other = other.clone();
        other.normalize();
        for (a, b) in self.limbs.iter_mut().zip(other.limbs.iter()) {
            *a += b;
        }
        self.normalize();
    }

    fn normalize(&mut self) {
        let mut carry = 0i64;
        for limb in self.limbs.iter_mut() {
            let v = *limb + carry;
            *limb = v & LIMB_MASK;
            carry = v >> LIMB_BITS;
        }
        debug_assert_eq!(carry, 0, "ExactSum overflow");
        self.pending = 0;
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// The sum, correctly rounded to the nearest double.
    pub fn value(&self) -> f64 {
        let mut s = self.clone();
        s.normalize();
        let Some(top) = s.limbs.iter().rposition(|&l| l != 0) else {
            return 0.0;
        };
        let low = top.saturating_sub(2);
        let mut mant: u128 = 0;
        for i in (low..=top).rev() {
            mant = (mant << LIMB_BITS) | s.limbs[i] as u128;
        }
        if s.limbs[..low].iter().any(|&l| l != 0) {
            mant |= 1;
        }
        // u128 -> f64 rounds to nearest-even; the sticky bit sits far below
        // the rounding position because mant carries at least 65 bits here
        ldexp(mant as f64, (low as i32) * LIMB_BITS as i32 - 1074)
    }
}

fn ldexp(mut x: f64, mut e: i32) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_sums_are_exact() {
        let mut s = ExactSum::new();
        for v in [0.5, 0.25, 3.0, 0.0] {
            s.add(v);
        }
        assert_eq!(s.value(), 3.75);
        assert_eq!(ExactSum::new().value(), 0.0);
        assert!(ExactSum::new().is_zero());
    }

    #[test]
    fn recovers_what_naive_summation_loses() {
        let mut s = ExactSum::new();
        s.add(1e16);
        s.add(1.0);
        s.add(1.0);
        assert_eq!(s.value(), 1e16 + 2.0);
        let mut t = ExactSum::new();
        t.add(f64::MIN_POSITIVE / 8.0);
        t.add(f64::MAX / 4.0);
        assert_eq!(t.value(), f64::MAX / 4.0);
    }

    #[test]
    #[should_panic]
    fn negative_values_panic() {
        ExactSum::new().add(-1.0);
    }

    proptest! {
        #[test]
        fn grouping_does_not_change_bits(
            vals in prop::collection::vec(prop_oneof![0.0f64..1e-12, 0.0f64..1.0, 0.0f64..1e9], 1..200),
            split in 0usize..200,
        ) {
            let split = split.min(vals.len());
            let mut whole = ExactSum::new();
            vals.iter().for_each(|&v| whole.add(v));
            let mut left = ExactSum::new();
            let mut right = ExactSum::new();
            vals[..split].iter().for_each(|&v| left.add(v));
            vals[split..].iter().rev().for_each(|&v| right.add(v));
            right.merge(&left);
            prop_assert_eq!(whole.value().to_bits(), right.value().to_bits());

            // agrees with a compensated reference to within an ulp or so
            let mut sum = 0.0f64;
            let mut comp = 0.0f64;
            for &v in &vals {
                let t = sum + v;
                if sum.abs() >= v.abs() { comp += (sum - t) + v; } else { comp += (v - t) + sum; }
                sum = t;
            }
            let reference = sum + comp;
            prop_assert!((whole.value() - reference).abs() <= 4.0 * f64::EPSILON * reference);
        }
    }
}
