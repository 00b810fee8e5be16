//! Detection of angles that are rational multiples of π and the rotation order of
//! the reflection group.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::polygon::Polygon;

/// Bounds for bounded-denominator rationality detection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalityBounds {
    pub max_denominator: u64,
    /// Accepted absolute error of `angle / π`.
    pub tolerance: f64,
}

impl Default for RationalityBounds {
    fn default() -> Self {
        // convergents with q near 1e6 approximate typical reals to ~1e-12,
        // so the tolerance sits below that
        RationalityBounds { max_denominator: 1_000_000, tolerance: 1e-13 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionGroupInfo {
    pub is_rational: bool,
    /// M such that the side reflections generate rotations by multiples of 2π/M.
    pub rotation_order: Option<u64>,
    /// Each interior angle as `(p, q)` meaning `(p/q)·π` in lowest terms.
    pub angles_over_pi: Option<Vec<(u64, u64)>>,
}

impl ReflectionGroupInfo {
    /// Order of the dihedral group generated by the side reflections.
    pub fn group_order(&self) -> Option<u64> {
        self.rotation_order.map(|m| 2 * m)
    }
}

/// Best rational approximation `p/q` of `x ≥ 0` among continued-fraction convergents with
/// `q ≤ max_den` and error within `tol`.
pub fn rational_approximation(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let (mut h0, mut h1): (u128, u128) = (0, 1);
    let (mut k0, mut k1): (u128, u128) = (1, 0);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e18 {
            break;
        }
        let a = a as u128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as u128 {
            break;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some((h2 as u64, k2 as u64));
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - r.floor();
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Rationality of the reflection group of `p`: each interior angle `(p_i/q_i)π`,
/// rotation order `M = lcm(q_i)`.
pub fn reflection_group_info(p: &Polygon, bounds: RationalityBounds) -> ReflectionGroupInfo {
    let mut fracs = Vec::with_capacity(p.len());
    for &a in p.angles() {
        match rational_approximation(a / PI, bounds.max_denominator, bounds.tolerance) {
            Some(f) => fracs.push(f),
            None => return ReflectionGroupInfo { is_rational: false, rotation_order: None, angles_over_pi: None },
        }
    }
    let m = fracs.iter().fold(1u64, |acc, &(_, q)| acc.lcm(&q));
    ReflectionGroupInfo { is_rational: true, rotation_order: Some(m), angles_over_pi: Some(fracs) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon::{polygon_from_tuples, triangle_from_angles, unit_square};

    #[test]
    fn square_order_two() {
        let info = reflection_group_info(&unit_square(), RationalityBounds::default());
        assert!(info.is_rational);
        assert_eq!(info.rotation_order, Some(2));
        assert_eq!(info.group_order(), Some(4));
        assert_eq!(info.angles_over_pi.unwrap(), vec![(1, 2); 4]);
    }

    #[test]
    fn pi_over_eight_triangle_order_eight() {
        let t = (PI / 8.0).tan();
        let p = polygon_from_tuples(&[(0.0, 0.0), (1.0, 0.0), (0.0, t)]).unwrap();
        let info = reflection_group_info(&p, RationalityBounds::default());
        assert_eq!(info.rotation_order, Some(8));
        let mut a = info.angles_over_pi.unwrap();
        a.sort();
        assert_eq!(a, vec![(1, 2), (1, 8), (3, 8)]);
    }

    #[test]
    fn one_radian_is_irrational() {
        let p = triangle_from_angles(1.0, 0.9).unwrap();
        let info = reflection_group_info(&p, RationalityBounds::default());
        assert!(!info.is_rational);
        assert_eq!(info.rotation_order, None);
    }

    #[test]
    fn convergent_search() {
        assert_eq!(rational_approximation(0.375, 100, 1e-13), Some((3, 8)));
        assert_eq!(rational_approximation(1.0 / PI, 1_000_000, 1e-13), None);
        assert_eq!(rational_approximation(1.0 / PI, 1_000, 1e-3), Some((7, 22)));
    }
}
