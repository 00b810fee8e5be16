//! Billiard stepping in exact rational arithmetic.
//!
//! Directions are rational vectors of arbitrary (nonzero) length; the flow parameter is
//! measured in units of that length, so physical time is `param · |direction|`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BilliardError, Termination};
use crate::geometry::point::RatPoint;
use crate::geometry::Polygon;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactState {
    pub position: RatPoint,
    pub direction: RatPoint,
    pub edge: Option<usize>,
}

impl ExactState {
    pub fn new(position: RatPoint, direction: RatPoint) -> Self {
        ExactState { position, direction, edge: None }
    }

    pub fn reversed(&self) -> Self {
        ExactState { position: self.position.clone(), direction: self.direction.neg(), edge: self.edge }
    }
}

/// Relative margin of the floating-point screen; anything closer is decided exactly.
const SCREEN: f64 = 1e-9;

/// One exact collision: `(next state, parameter advanced, edge)`.
///
/// A floating-point pass discards edges and vertices that are clearly irrelevant; every
/// remaining decision is made in exact arithmetic, so the result does not depend on it.
pub fn step_exact(p: &Polygon, s: &ExactState) -> Result<(ExactState, BigRational, usize), BilliardError> {
    let v = p.exact_vertices().ok_or(BilliardError::NotExact)?;
    if s.direction.is_zero() {
        return Err(BilliardError::ZeroDirection);
    }
    let n = v.len();
    let fv = p.vertices();
    let (x, d) = (s.position.to_f64(), s.direction.to_f64());

    let mut screened: Vec<(usize, f64, f64)> = Vec::with_capacity(n);
    let mut upper = f64::INFINITY;
    for i in 0..n {
        if Some(i) == s.edge {
            continue;
        }
        let e = fv[(i + 1) % n] - fv[i];
        let w = fv[i] - x;
        let den = d.cross(e);
        if den.abs() <= SCREEN * d.norm() * e.norm() {
            screened.push((i, f64::NEG_INFINITY, f64::INFINITY));
            continue;
        }
        let (t, u) = (w.cross(e) / den, w.cross(d) / den);
        let tol_t = SCREEN * (1.0 + w.norm() * e.norm() / den.abs());
        let tol_u = SCREEN * (1.0 + w.norm() * d.norm() / den.abs());
        if u < -tol_u || u > 1.0 + tol_u || t < -tol_t {
            continue;
        }
        if t > tol_t && u > tol_u && u < 1.0 - tol_u {
            upper = upper.min(t + tol_t);
        }
        screened.push((i, t - tol_t, t + tol_t));
    }

    let mut best: Option<(BigRational, usize, BigRational)> = None;
    for &(i, lo, _) in &screened {
        if lo > upper {
            continue;
        }
        let a = &v[i];
        let e = v[(i + 1) % n].sub(a);
        let denom = s.direction.cross(&e);
        if denom.is_zero() {
            continue;
        }
        let w = a.sub(&s.position);
        let t = w.cross(&e) / &denom;
        let u = w.cross(&s.direction) / &denom;
        if t.is_positive() && !u.is_negative() && u <= BigRational::one() && best.as_ref().is_none_or(|(bt, _, _)| &t < bt) {
            best = Some((t, i, u));
        }
    }
    let (t, edge, u) = best.ok_or(BilliardError::NoIntersection)?;
    if u.is_zero() || u.is_one() {
        let vertex = if u.is_zero() { edge } else { (edge + 1) % n };
        return Err(BilliardError::HitVertex { vertex, position: v[vertex].to_f64() });
    }
    // a vertex strictly before the hit point on the ray
    for (k, q) in v.iter().enumerate() {
        let wf = fv[k] - x;
        if wf.cross(d).abs() > SCREEN * (1.0 + wf.norm() * d.norm()) {
            continue;
        }
        let w = q.sub(&s.position);
        if w.cross(&s.direction).is_zero() {
            let along = w.dot(&s.direction);
            if along.is_positive() && along <= &t * s.direction.dot(&s.direction) {
                return Err(BilliardError::HitVertex { vertex: k, position: q.to_f64() });
            }
        }
    }
    let hit = s.position.add(&s.direction.scale(&t));
    let e = v[(edge + 1) % n].sub(&v[edge]);
    let out = s.direction.reflect_across(&e);
    Ok((ExactState { position: hit, direction: out, edge: Some(edge) }, t, edge))
}

#[derive(Debug, Clone)]
pub struct ExactTrajectory {
    pub initial: ExactState,
    /// State right after each collision.
    pub collisions: Vec<ExactState>,
    pub final_state: ExactState,
    pub termination: Termination,
}

/// Exact flow for parameter `horizon` (time `horizon · |direction|`).
pub fn flow_exact(p: &Polygon, s: &ExactState, horizon: &BigRational, max_steps: usize) -> Result<ExactTrajectory, BilliardError> {
    p.exact_vertices().ok_or(BilliardError::NotExact)?;
    let mut cur = s.clone();
    let mut left = horizon.clone();
    let mut collisions = Vec::new();
    let mut termination = Termination::Completed;
    while left.is_positive() {
        if collisions.len() >= max_steps {
            termination = Termination::StepLimit;
            break;
        }
        match step_exact(p, &cur) {
            Ok((next, t, _)) => {
                if t >= left {
                    let pos = cur.position.add(&cur.direction.scale(&left));
                    cur = ExactState { position: pos, direction: cur.direction.clone(), edge: None };
                    break;
                }
                left -= t;
                collisions.push(next.clone());
                cur = next;
            }
            Err(BilliardError::HitVertex { .. }) => {
                termination = Termination::HitVertex;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ExactTrajectory { initial: s.clone(), collisions, final_state: cur, termination })
}
