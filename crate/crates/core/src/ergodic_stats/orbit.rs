//! Orbits as lists of straight pieces, and integrals along them.

use std::f64::consts::TAU;

use crate::billiard::{flow, Termination, UnitTangentState};
use crate::geometry::point::Vec2;
use crate::geometry::Polygon;
use crate::numerics::compensated_sum;
use crate::surface_flow::{straight_line_flow_dir, FlowError};
use crate::unfolding::TranslationSurface;

use super::functions::TestFunction;

/// Straight piece `x(t) = start + (t − t0) · direction` for `t ∈ [t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub t1: f64,
    pub start: Vec2,
    pub direction: Vec2,
    pub theta: f64,
}

impl Segment {
    pub fn at(&self, t: f64) -> Vec2 {
        self.start + self.direction * (t - self.t0)
    }
}

/// Orbit over `[0, time]`. `complete` is false when it stopped early (vertex, cone point,
/// tangency or step limit).
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub segments: Vec<Segment>,
    pub time: f64,
    pub complete: bool,
}

impl Orbit {
    /// Billiard orbit; positions in table coordinates.
    pub fn billiard(p: &Polygon, s: &UnitTangentState, t: f64, max_steps: usize) -> Orbit {
        let tr = flow(p, s, t, max_steps);
        let segments = tr
            .segments()
            .filter(|&(a, b, _, _)| b > a)
            .map(|(t0, t1, start, d)| Segment { t0, t1, start, direction: d, theta: d.angle() })
            .collect();
        Orbit { segments, time: tr.total_time, complete: tr.termination == Termination::Completed }
    }

    /// Linear flow on a surface; positions in the coordinates of the current cell.
    pub fn surface(
        s: &TranslationSurface,
        direction: Vec2,
        cell: usize,
        start: Vec2,
        t: f64,
        max_crossings: usize,
    ) -> Result<Orbit, FlowError> {
        let tr = straight_line_flow_dir(s, direction, cell, start, t, max_crossings)?;
        let d = tr.direction;
        let theta = d.angle();
        let mut segments = Vec::with_capacity(tr.crossings.len() + 1);
        let (mut t0, mut x0) = (0.0, tr.start);
        for c in &tr.crossings {
            if c.time > t0 {
                segments.push(Segment { t0, t1: c.time, start: x0, direction: d, theta });
            }
            t0 = c.time;
            x0 = c.position;
        }
        if tr.total_time > t0 {
            segments.push(Segment { t0, t1: tr.total_time, start: x0, direction: d, theta });
        }
        let complete = tr.hit_cone_point.is_none() && tr.total_time >= t;
        Ok(Orbit { segments, time: tr.total_time, complete })
    }

    /// The part over `[a, b]`, shifted to start at time 0.
    pub fn window(&self, a: f64, b: f64) -> Orbit {
        let b = b.min(self.time);
        let segments = self
            .segments
            .iter()
            .filter(|s| s.t1 > a && s.t0 < b)
            .map(|s| {
                let (u0, u1) = (s.t0.max(a), s.t1.min(b));
                Segment { t0: u0 - a, t1: u1 - a, start: s.at(u0), direction: s.direction, theta: s.theta }
            })
            .collect();
        Orbit { segments, time: (b - a).max(0.0), complete: self.complete || self.time >= b }
    }

    /// Sorted disjoint time intervals spent in `R × I`.
    pub fn sojourn_intervals(&self, f: &TestFunction) -> Vec<(f64, f64)> {
        let TestFunction::Indicator { rect, arc } = f else {
            return Vec::new();
        };
        let mut out: Vec<(f64, f64)> = Vec::new();
        for s in &self.segments {
            if !arc.contains(s.theta) {
                continue;
            }
            if let Some((u0, u1)) = rect.clip_ray(s.start, s.direction, 0.0, s.t1 - s.t0) {
                let (a, b) = (s.t0 + u0, s.t0 + u1);
                match out.last_mut() {
                    Some(last) if a <= last.1 => last.1 = last.1.max(b),
                    _ => out.push((a, b)),
                }
            }
        }
        out
    }

    /// `∫₀^time f(x(t), θ(t)) dt`: exact for indicators, adaptive Gauss–Legendre otherwise.
    pub fn integral(&self, f: &TestFunction, tol: f64) -> f64 {
        if f.is_indicator() {
            return compensated_sum(self.sojourn_intervals(f).iter().map(|(a, b)| b - a));
        }
        compensated_sum(self.segments.iter().map(|s| adaptive(&|t| f.eval(s.at(t), s.theta), s.t0, s.t1, tol, 0)))
    }

    /// `∫₀^time e^{−2πiαt} f dt` as `(re, im)`.
    pub fn twisted_integral(&self, f: &TestFunction, alpha: f64, tol: f64) -> (f64, f64) {
        let w = TAU * alpha;
        if f.is_indicator() {
            let parts: Vec<(f64, f64)> = self.sojourn_intervals(f).iter().map(|&(a, b)| exp_integral(w, a, b)).collect();
            return (compensated_sum(parts.iter().map(|p| p.0)), compensated_sum(parts.iter().map(|p| p.1)));
        }
        let mut re = Vec::with_capacity(self.segments.len());
        let mut im = Vec::with_capacity(self.segments.len());
        for s in &self.segments {
            // split so each piece carries at most a quarter turn of the twist
            let n = ((w.abs() * (s.t1 - s.t0) / (TAU / 4.0)).ceil() as usize).max(1);
            let h = (s.t1 - s.t0) / n as f64;
            for k in 0..n {
                let (a, b) = (s.t0 + k as f64 * h, s.t0 + (k + 1) as f64 * h);
                re.push(adaptive(&|t| f.eval(s.at(t), s.theta) * (w * t).cos(), a, b, tol, 0));
                im.push(adaptive(&|t| -f.eval(s.at(t), s.theta) * (w * t).sin(), a, b, tol, 0));
            }
        }
        (compensated_sum(re), compensated_sum(im))
    }

    /// State at time `t`.
    pub fn state_at(&self, t: f64) -> Option<(Vec2, f64)> {
        let k = self.segments.partition_point(|s| s.t1 < t);
        self.segments.get(k).filter(|s| s.t0 <= t).map(|s| (s.at(t), s.theta))
    }
}

/// `∫_a^b e^{−iwt} dt`.
fn exp_integral(w: f64, a: f64, b: f64) -> (f64, f64) {
    if (w * (b - a)).abs() < 1e-8 {
        let m = (a + b) / 2.0;
        return ((b - a) * (w * m).cos(), -(b - a) * (w * m).sin());
    }
    (((w * b).sin() - (w * a).sin()) / w, ((w * b).cos() - (w * a).cos()) / w)
}

const GL_X: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
const GL_W: [f64; 5] =
    [0.568_888_888_888_888_9, 0.478_628_670_499_366_5, 0.478_628_670_499_366_5, 0.236_926_885_056_189_1, 0.236_926_885_056_189_1];

fn gauss5(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    h * GL_X.iter().zip(&GL_W).map(|(x, w)| w * g(m + h * x)).sum::<f64>()
}

/// Adaptive 5-point Gauss–Legendre; `tol` is absolute per unit length.
pub(crate) fn adaptive(g: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    if b <= a {
        return 0.0;
    }
    let whole = gauss5(g, a, b);
    let m = (a + b) / 2.0;
    let halves = gauss5(g, a, m) + gauss5(g, m, b);
    if depth >= 30 || (whole - halves).abs() <= tol * (b - a) {
        halves
    } else {
        adaptive(g, a, m, tol, depth + 1) + adaptive(g, m, b, tol, depth + 1)
    }
}

/// `∫₀^T f(x(t), y(t)) dt` for the product of two orbits, integrating over pieces where
/// both are straight.
pub fn product_integral(a: &Orbit, b: &Orbit, f: &dyn Fn(Vec2, f64, Vec2, f64) -> f64, tol: f64) -> f64 {
    let t = a.time.min(b.time);
    let (mut i, mut j) = (0, 0);
    let mut parts = Vec::new();
    let mut t0 = 0.0;
    while i < a.segments.len() && j < b.segments.len() && t0 < t {
        let (sa, sb) = (&a.segments[i], &b.segments[j]);
        let t1 = sa.t1.min(sb.t1).min(t);
        if t1 > t0 {
            parts.push(adaptive(&|u| f(sa.at(u), sa.theta, sb.at(u), sb.theta), t0, t1, tol, 0));
        }
        t0 = t1;
        if sa.t1 <= t1 {
            i += 1;
        }
        if sb.t1 <= t1 {
            j += 1;
        }
    }
    compensated_sum(parts)
}

/// Measure of the intersection of two sorted disjoint interval lists.
pub fn overlap(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut parts = Vec::new();
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if hi > lo {
            parts.push(hi - lo);
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    compensated_sum(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_integrates_oscillation() {
        let v = adaptive(&|t: f64| (10.0 * t).sin().powi(2), 0.0, 3.0, 1e-12, 0);
        let exact = 1.5 - (60.0f64).sin() / 40.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn overlap_of_intervals() {
        assert_eq!(overlap(&[(0.0, 1.0), (2.0, 3.0)], &[(0.5, 2.5)]), 1.0);
    }

    #[test]
    fn exp_integral_matches_quadrature() {
        let (re, im) = exp_integral(3.0, 0.2, 1.7);
        let qr = adaptive(&|t: f64| (3.0 * t).cos(), 0.2, 1.7, 1e-13, 0);
        let qi = adaptive(&|t: f64| -(3.0 * t).sin(), 0.2, 1.7, 1e-13, 0);
        assert!((re - qr).abs() < 1e-12 && (im - qi).abs() < 1e-12);
    }
}
