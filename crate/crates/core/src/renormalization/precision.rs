//! Extended-precision lengths for long induction runs.

use num_bigint::{BigInt, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::surface_flow::Iet;

/// Bits of length precision that keep induction generic up to time `t`.
pub fn bits_for_time(t: f64) -> u64 {
    let t = if t.is_finite() { t.max(0.0) } else { 0.0 };
    (1.5 * t / std::f64::consts::LN_2).ceil() as u64 + 128
}

/// Exact copy of `i` whose lengths are extended below their last float bit by
/// seeded random digits, to `bits` bits after the binary point of the total length.
///
/// Heights are converted exactly. A float IET is a rational one and reaches a
/// connection after a time of roughly 36; the extension behaves like a generic
/// nearby IET in the same Rauzy class for a time of about `bits · ln 2`.
pub fn lift_precision(i: &Iet<f64>, bits: u64, seed: u64) -> Iet<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = i.total_length();
    let denom = BigInt::one() << bits;
    let float_ulp_bits = (total.log2().ceil() as i64 - 53).min(bits as i64);
    // random digits fill positions strictly below one ulp of the total
    let tail_bits = (bits as i64 + float_ulp_bits).max(0) as u64;
    let tail_bound = BigInt::one() << tail_bits;
    let mut exact = i.to_rational();
    for l in &mut exact.lengths {
        let jitter = if tail_bits == 0 { BigInt::zero() } else { rng.gen_bigint_range(&BigInt::zero(), &tail_bound) };
        *l = l.clone() + BigRational::new(jitter, denom.clone());
    }
    exact
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_flow::Scalar;

    #[test]
    fn lift_is_close_and_deterministic() {
        let i = Iet::new(vec![0.3, 0.5, 0.2], vec![0, 1, 2], vec![2, 1, 0], vec![1.0, 1.0, 1.0]).unwrap();
        let a = lift_precision(&i, 300, 7);
        assert_eq!(a, lift_precision(&i, 300, 7));
        for (x, y) in a.lengths.iter().zip(&i.lengths) {
            assert!((x.to_f64() - y).abs() <= 2.0 * f64::EPSILON);
        }
        assert_ne!(a.lengths, i.to_rational().lengths);
    }
}
