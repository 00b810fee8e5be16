//! Planar points and vectors, in binary64 and exact rational flavours.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at angle `theta` from the positive x axis.
    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2 { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    /// Reflection of `self` across the line spanned by `axis`.
    pub fn reflect_across(self, axis: Vec2) -> Vec2 {
        let k = 2.0 * self.dot(axis) / axis.norm_sq();
        axis * k - self
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, k: f64) -> Vec2 {
        Vec2::new(self.x / k, self.y / k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Maps any angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = theta.rem_euclid(tau);
    if r >= tau {
        0.0
    } else {
        r
    }
}

/// Smallest absolute difference between two angles on the circle, in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(std::f64::consts::TAU - d)
}

/// Exact point with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl RatPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        RatPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RatPoint::new(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    /// Exact conversion of binary64 coordinates.
    pub fn from_f64(p: Vec2) -> Option<Self> {
        Some(RatPoint::new(BigRational::from_float(p.x)?, BigRational::from_float(p.y)?))
    }

    pub fn to_f64(&self) -> Vec2 {
        Vec2::new(rat_to_f64(&self.x), rat_to_f64(&self.y))
    }

    pub fn sub(&self, o: &RatPoint) -> RatPoint {
        RatPoint::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &RatPoint) -> RatPoint {
        RatPoint::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, k: &BigRational) -> RatPoint {
        RatPoint::new(&self.x * k, &self.y * k)
    }

    pub fn dot(&self, o: &RatPoint) -> BigRational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &RatPoint) -> BigRational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn neg(&self) -> RatPoint {
        RatPoint::new(-&self.x, -&self.y)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Reflection across the line spanned by `axis`, exact.
    pub fn reflect_across(&self, axis: &RatPoint) -> RatPoint {
        let k = BigRational::from_integer(BigInt::from(2)) * self.dot(axis) / axis.dot(axis);
        axis.scale(&k).sub(self)
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back on a shifted quotient for huge numerators/denominators
        let n = r.numer();
        let d = r.denom();
        let shift = (n.bits() as i64).max(d.bits() as i64) - 60;
        if shift <= 0 {
            return f64::NAN;
        }
        let nn = (n >> shift as usize).to_f64().unwrap_or(0.0);
        let dd = (d >> shift as usize).to_f64().unwrap_or(1.0);
        nn / dd
    })
}

/// Parses `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(i));
    }
    // decimal literal: exact base-10 expansion
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, den);
    Some(if neg { -r } else { r })
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign of a rational as -1, 0, 1.
pub fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-2").unwrap(), BigRational::from_integer((-2).into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn reflection_matches_float() {
        let v = Vec2::new(0.3, -0.7);
        let axis = Vec2::new(2.0, 1.0);
        let r = v.reflect_across(axis);
        let rv = RatPoint::from_f64(v).unwrap().reflect_across(&RatPoint::from_ints(2, 1));
        assert!((rv.to_f64() - r).norm() < 1e-15);
        assert!((r.norm() - v.norm()).abs() < 1e-15);
    }

    #[test]
    fn angles_wrap() {
        assert!((normalize_angle(-0.5) - (std::f64::consts::TAU - 0.5)).abs() < 1e-15);
        assert!((angle_distance(0.1, std::f64::consts::TAU - 0.1) - 0.2).abs() < 1e-12);
    }
}
