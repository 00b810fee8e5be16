//! 2×2 real matrices and the standard one-parameter subgroups of `SL(2, ℝ)`.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;
use std::ops::Mul;

use super::FlowError;
use crate::geometry::point::Vec2;

/// `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn diag(x: f64, y: f64) -> Self {
        Mat2::new(x, 0.0, 0.0, y)
    }

    /// `g_t = diag(e^t, e^{-t})`.
    pub fn geodesic(t: f64) -> Self {
        Mat2::diag(t.exp(), (-t).exp())
    }

    /// `h_s = [[1, s], [0, 1]]`.
    pub fn shear(s: f64) -> Self {
        Mat2::new(1.0, s, 0.0, 1.0)
    }

    /// `ĥ_s = [[1, 0], [s, 1]]`.
    pub fn lower_shear(s: f64) -> Self {
        Mat2::new(1.0, 0.0, s, 1.0)
    }

    /// `r_θ = [[cos θ, -sin θ], [sin θ, cos θ]]`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Mat2 {
        let k = 1.0 / self.det();
        Mat2::new(self.d * k, -self.b * k, -self.c * k, self.a * k)
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d].iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Operator 2-norm.
    pub fn operator_norm(&self) -> f64 {
        let f = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.det();
        ((f + (f * f - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d, self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite matrix entry")
}

/// Product of the matrices evaluated in exact arithmetic and rounded once per entry.
pub fn product_exact(ms: &[Mat2]) -> Mat2 {
    let mut acc = [BigRational::one(), BigRational::zero(), BigRational::zero(), BigRational::one()];
    for m in ms {
        let [a, b, c, d] = [m.a, m.b, m.c, m.d].map(exact);
        acc = [&acc[0] * &a + &acc[1] * &c, &acc[0] * &b + &acc[1] * &d, &acc[2] * &a + &acc[3] * &c, &acc[2] * &b + &acc[3] * &d];
    }
    let [a, b, c, d] = acc.map(|x| x.to_f64().unwrap_or(f64::NAN));
    Mat2::new(a, b, c, d)
}

/// Neighbouring float `k` representable steps away (in magnitude order).
fn ulp_step(x: f64, k: i64) -> f64 {
    f64::from_bits((x.to_bits() as i64 + k) as u64)
}

/// Largest entry of `|ĥ_t · diag(c, s) · h_{-t} - target|`, evaluated exactly.
fn factor_residual(t: f64, c: f64, s: f64, target: &[BigRational; 4]) -> f64 {
    let (t, c, s) = (exact(t), exact(c), exact(s));
    let tc = &t * &c;
    let entries = [c.clone(), -tc.clone(), tc.clone(), s - &tc * &t];
    entries.iter().zip(target).map(|(x, y)| (x - y).abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
}

/// `r_θ = ĥ_{tan θ} · diag(cos θ, sec θ) · h_{-tan θ}`, valid for `cos θ ≠ 0`.
///
/// The float representatives of `tan θ`, `cos θ`, `sec θ` are chosen among their nearest
/// neighbours so that the exactly evaluated product reproduces `Mat2::rotation(θ)` as closely
/// as possible; near `±π/2` independent rounding of the three factors would otherwise leave an
/// error of order `ε·sec θ` in the lower-right entry.
pub fn rotation_decomposition(theta: f64) -> Result<(Mat2, Mat2, Mat2), FlowError> {
    let c = theta.cos();
    let r = (theta.abs() % std::f64::consts::PI - FRAC_PI_2).abs();
    if r < 1e-12 || c == 0.0 {
        return Err(FlowError::VerticalRotation(theta));
    }
    let t = theta.tan();
    let build = |t: f64, c: f64, s: f64| (Mat2::lower_shear(t), Mat2::diag(c, s), Mat2::shear(-t));
    if theta == 0.0 {
        return Ok(build(0.0, 1.0, 1.0));
    }
    let rot = Mat2::rotation(theta);
    let target = [rot.a, rot.b, rot.c, rot.d].map(exact);
    let mut best = (factor_residual(t, c, 1.0 / c, &target), t, c, 1.0 / c);
    if best.0 > 2e-15 {
        'search: for dc in (0..=64).flat_map(|k| [k, -k]) {
            let cc = ulp_step(c, dc);
            for dt in -4..=4 {
                let tt = ulp_step(t, dt);
                let s0 = 1.0 / cc;
                for ds in -1..=1 {
                    let ss = ulp_step(s0, ds);
                    let res = factor_residual(tt, cc, ss, &target);
                    if res < best.0 {
                        best = (res, tt, cc, ss);
                        if res <= 2e-15 {
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    Ok(build(best.1, best.2, best.3))
}
