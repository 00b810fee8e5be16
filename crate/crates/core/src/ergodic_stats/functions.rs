//! Test functions on the unit tangent bundle and their Liouville means.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::geometry::point::{angle_distance, normalize_angle, Vec2};

/// Closed-open arc `[start, start + length)` of directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub length: f64,
}

impl Arc {
    pub const FULL: Arc = Arc { start: 0.0, length: TAU };

    pub fn new(start: f64, length: f64) -> Self {
        Arc { start: normalize_angle(start), length: length.clamp(0.0, TAU) }
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.length >= TAU || normalize_angle(theta - self.start) < self.length
    }

    /// Normalized measure `|I| / 2π`.
    pub fn measure(&self) -> f64 {
        self.length / TAU
    }
}

/// Axis-parallel rectangle `[lo.x, hi.x] × [lo.y, hi.y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub lo: Vec2,
    pub hi: Vec2,
}

impl Rect {
    pub fn new(lo: Vec2, hi: Vec2) -> Self {
        Rect { lo: Vec2::new(lo.x.min(hi.x), lo.y.min(hi.y)), hi: Vec2::new(lo.x.max(hi.x), lo.y.max(hi.y)) }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.lo.x && p.x <= self.hi.x && p.y >= self.lo.y && p.y <= self.hi.y
    }

    /// Parameter interval of `x + s d` inside the rectangle, if nonempty.
    pub fn clip_ray(&self, x: Vec2, d: Vec2, s0: f64, s1: f64) -> Option<(f64, f64)> {
        let (mut a, mut b) = (s0, s1);
        for (p, v, lo, hi) in [(x.x, d.x, self.lo.x, self.hi.x), (x.y, d.y, self.lo.y, self.hi.y)] {
            if v == 0.0 {
                if p < lo || p > hi {
                    return None;
                }
            } else {
                let (t0, t1) = ((lo - p) / v, (hi - p) / v);
                a = a.max(t0.min(t1));
                b = b.min(t0.max(t1));
            }
        }
        (b > a).then_some((a, b))
    }
}

/// A function on the unit tangent bundle `(x, θ)`.
///
/// Lipschitz constants refer to the metric `|x − y| + dist_S¹(θ, ψ)`, which is dominated by
/// the path metric of the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestFunction {
    Constant {
        value: f64,
    },
    /// `1_R(x) · 1_I(θ)`.
    Indicator {
        rect: Rect,
        arc: Arc,
    },
    /// `A · tent(x) · tent(y) · tent(θ)` with `tent(u) = max(0, 1 − |u − c| / r)`.
    Tent {
        center: Vec2,
        theta: f64,
        radius: Vec2,
        angular_radius: f64,
        amplitude: f64,
    },
    /// `A · cos(2π ⟨w, x⟩ + φ) · cos(mθ + ψ)`.
    Trig {
        wave: Vec2,
        phase: f64,
        mode: i32,
        angular_phase: f64,
        amplitude: f64,
    },
}

fn tent(u: f64, c: f64, r: f64) -> f64 {
    (1.0 - (u - c).abs() / r).max(0.0)
}

impl TestFunction {
    pub fn indicator(rect: Rect, arc: Arc) -> Self {
        TestFunction::Indicator { rect, arc }
    }

    /// Tent with unit amplitude; angular radius capped at π.
    pub fn tent(center: Vec2, theta: f64, radius: Vec2, angular_radius: f64) -> Self {
        TestFunction::Tent { center, theta: normalize_angle(theta), radius, angular_radius: angular_radius.min(PI), amplitude: 1.0 }
    }

    /// Spatial character `cos(2π⟨w, x⟩ + φ)`, constant in θ.
    pub fn character(wave: Vec2, phase: f64) -> Self {
        TestFunction::Trig { wave, phase, mode: 0, angular_phase: 0.0, amplitude: 1.0 }
    }

    pub fn is_indicator(&self) -> bool {
        matches!(self, TestFunction::Indicator { .. })
    }

    /// Same function multiplied by `k`; indicators are returned unchanged.
    pub fn scaled(&self, k: f64) -> Self {
        let mut f = self.clone();
        match &mut f {
            TestFunction::Constant { value } => *value *= k,
            TestFunction::Tent { amplitude, .. } | TestFunction::Trig { amplitude, .. } => *amplitude *= k,
            TestFunction::Indicator { .. } => {}
        }
        f
    }

    pub fn eval(&self, x: Vec2, theta: f64) -> f64 {
        match *self {
            TestFunction::Constant { value } => value,
            TestFunction::Indicator { rect, arc } => f64::from(u8::from(rect.contains(x) && arc.contains(theta))),
            TestFunction::Tent { center, theta: c, radius, angular_radius, amplitude } => {
                amplitude
                    * tent(x.x, center.x, radius.x)
                    * tent(x.y, center.y, radius.y)
                    * (1.0 - angle_distance(theta, c) / angular_radius).max(0.0)
            }
            TestFunction::Trig { wave, phase, mode, angular_phase, amplitude } => {
                amplitude * (TAU * wave.dot(x) + phase).cos() * (f64::from(mode) * theta + angular_phase).cos()
            }
        }
    }

    /// `sup |f|`.
    pub fn sup_norm(&self) -> f64 {
        match *self {
            TestFunction::Constant { value } => value.abs(),
            TestFunction::Indicator { .. } => 1.0,
            TestFunction::Tent { amplitude, .. } | TestFunction::Trig { amplitude, .. } => amplitude.abs(),
        }
    }

    /// Declared Lipschitz constant; `None` for indicators.
    pub fn lipschitz(&self) -> Option<f64> {
        match *self {
            TestFunction::Constant { .. } => Some(0.0),
            TestFunction::Indicator { .. } => None,
            TestFunction::Tent { radius, angular_radius, amplitude, .. } => {
                Some(amplitude.abs() * radius.x.recip().hypot(radius.y.recip()).max(angular_radius.recip()))
            }
            TestFunction::Trig { wave, mode, amplitude, .. } => Some(amplitude.abs() * (TAU * wave.norm()).max(f64::from(mode.abs()))),
        }
    }

    /// Mean over area measure on `cells` with the direction fixed at `theta`, the invariant
    /// measure of a linear flow on a translation surface.
    pub fn mean_at_direction(&self, cells: &[Vec<Vec2>], theta: f64) -> f64 {
        let angular = match *self {
            TestFunction::Constant { .. } => 1.0,
            TestFunction::Indicator { arc, .. } => f64::from(u8::from(arc.contains(theta))),
            TestFunction::Tent { theta: c, angular_radius, .. } => (1.0 - angle_distance(theta, c) / angular_radius).max(0.0),
            TestFunction::Trig { mode, angular_phase, .. } => (f64::from(mode) * theta + angular_phase).cos(),
        };
        if angular == 0.0 {
            return 0.0;
        }
        let flat = match self {
            TestFunction::Indicator { rect, .. } => TestFunction::Indicator { rect: *rect, arc: Arc::FULL },
            TestFunction::Tent { center, radius, amplitude, .. } => {
                TestFunction::Tent { center: *center, theta: 0.0, radius: *radius, angular_radius: PI, amplitude: *amplitude }
            }
            TestFunction::Trig { wave, phase, amplitude, .. } => {
                TestFunction::Trig { wave: *wave, phase: *phase, mode: 0, angular_phase: 0.0, amplitude: *amplitude }
            }
            c => c.clone(),
        };
        // a tent of angular radius π has angular mean 1/2
        let correction = if matches!(self, TestFunction::Tent { .. }) { 2.0 } else { 1.0 };
        angular * correction * flat.liouville_mean(cells)
    }

    /// Mean over the normalized Liouville measure of the region `cells` × S¹.
    pub fn liouville_mean(&self, cells: &[Vec<Vec2>]) -> f64 {
        let area: f64 = cells.iter().map(|c| signed_area(c)).sum();
        let spatial = |g: &dyn Fn(Vec2) -> f64, n: usize| cells.iter().map(|c| integrate_polygon(c, g, n)).sum::<f64>() / area;
        match *self {
            TestFunction::Constant { value } => value,
            TestFunction::Indicator { rect, arc } => {
                let a: f64 = cells.iter().map(|c| signed_area(&clip_to_rect(c, rect))).sum();
                a / area * arc.measure()
            }
            TestFunction::Tent { center, theta: _, radius, angular_radius, amplitude } => {
                // bilinear on each quadrant of the support, so the midpoint rule is exact there
                let mut total = 0.0;
                for (sx, sy) in [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)] {
                    let q = Rect::new(center, center + Vec2::new(sx * radius.x, sy * radius.y));
                    let g = |p: Vec2| tent(p.x, center.x, radius.x) * tent(p.y, center.y, radius.y);
                    total += cells.iter().map(|c| integrate_polygon(&clip_to_rect(c, q), &g, 1)).sum::<f64>();
                }
                amplitude * total / area * (angular_radius / TAU)
            }
            TestFunction::Trig { wave, phase, mode, angular_phase, amplitude } => {
                if mode != 0 {
                    return 0.0;
                }
                let diam = cells.iter().flatten().map(|p| p.norm()).fold(0.0, f64::max) * 2.0;
                let n = 8 + (8.0 * wave.norm() * diam).ceil() as usize;
                amplitude * angular_phase.cos() * spatial(&|p: Vec2| (TAU * wave.dot(p) + phase).cos(), n)
            }
        }
    }
}

/// Shoelace area (positive for counterclockwise order).
pub(crate) fn signed_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Sutherland–Hodgman clip against an axis-parallel rectangle. For non-convex input the output
/// may contain doubled edges along the rectangle, which cancel in signed integrals.
pub(crate) fn clip_to_rect(poly: &[Vec2], r: Rect) -> Vec<Vec2> {
    let planes: [(Vec2, f64); 4] =
        [(Vec2::new(1.0, 0.0), r.lo.x), (Vec2::new(-1.0, 0.0), -r.hi.x), (Vec2::new(0.0, 1.0), r.lo.y), (Vec2::new(0.0, -1.0), -r.hi.y)];
    let mut out = poly.to_vec();
    for (n, c) in planes {
        if out.is_empty() {
            break;
        }
        let input = std::mem::take(&mut out);
        let m = input.len();
        for i in 0..m {
            let (a, b) = (input[i], input[(i + 1) % m]);
            let (fa, fb) = (n.dot(a) - c, n.dot(b) - c);
            if fa >= 0.0 {
                out.push(a);
            }
            if (fa >= 0.0) != (fb >= 0.0) {
                out.push(a + (b - a) * (fa / (fa - fb)));
            }
        }
    }
    out
}

/// Signed integral of `g` over a polygon: fan triangles from the first vertex, each split into
/// `n²` pieces with the edge-midpoint rule (exact for quadratics).
pub(crate) fn integrate_polygon(v: &[Vec2], g: &dyn Fn(Vec2) -> f64, n: usize) -> f64 {
    if v.len() < 3 {
        return 0.0;
    }
    let n = n.max(1);
    let mut total = 0.0;
    for k in 1..v.len() - 1 {
        let (a, b, c) = (v[0], v[k], v[k + 1]);
        let area = (b - a).cross(c - a) / 2.0;
        if area == 0.0 {
            continue;
        }
        let (eb, ec) = ((b - a) / n as f64, (c - a) / n as f64);
        let node = |i: usize, j: usize| a + eb * i as f64 + ec * j as f64;
        let rule = |p: Vec2, q: Vec2, r: Vec2| (g((p + q) / 2.0) + g((q + r) / 2.0) + g((r + p) / 2.0)) / 3.0;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n - i {
                s += rule(node(i, j), node(i + 1, j), node(i, j + 1));
                if i + j + 1 < n {
                    s += rule(node(i + 1, j), node(i + 1, j + 1), node(i, j + 1));
                }
            }
        }
        total += s * area / (n * n) as f64;
    }
    total
}

/// Tent functions with centers on a `k × k × k` grid over the bounding box of `cells` and S¹,
/// radii one grid step, unit amplitude.
pub fn tent_grid(cells: &[Vec<Vec2>], k: usize) -> Vec<TestFunction> {
    let k = k.max(1);
    let pts = cells.iter().flatten();
    let lo = pts.clone().fold(Vec2::new(f64::INFINITY, f64::INFINITY), |m, p| Vec2::new(m.x.min(p.x), m.y.min(p.y)));
    let hi = pts.fold(Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |m, p| Vec2::new(m.x.max(p.x), m.y.max(p.y)));
    let step = Vec2::new((hi.x - lo.x) / k as f64, (hi.y - lo.y) / k as f64);
    let mut out = Vec::with_capacity(k * k * k);
    for i in 0..k {
        for j in 0..k {
            for a in 0..k {
                let c = Vec2::new(lo.x + (i as f64 + 0.5) * step.x, lo.y + (j as f64 + 0.5) * step.y);
                out.push(TestFunction::tent(c, TAU * a as f64 / k as f64, step, TAU / k as f64));
            }
        }
    }
    out
}
