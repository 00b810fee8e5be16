use serde::Serialize;

use super::{BilliardError, UnitTangentState, TANGENT_TOL, VERTEX_TOL};
use crate::geometry::point::Vec2;
use crate::geometry::Polygon;

/// Outcome of one collision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub next: UnitTangentState,
    pub dt: f64,
    pub edge: usize,
}

/// Ray from `x` along unit `d`: first boundary crossing `(t, edge, point)`, skipping `skip`.
pub(crate) fn first_hit(p: &Polygon, x: Vec2, d: Vec2, skip: Option<usize>) -> Result<(f64, usize, Vec2), BilliardError> {
    let n = p.len();
    let mut best: Option<(f64, usize)> = None;
    for i in 0..n {
        if Some(i) == skip {
            continue;
        }
        let (a, b) = p.edge(i);
        let e = b - a;
        let denom = d.cross(e);
        if denom == 0.0 {
            continue;
        }
        let w = a - x;
        let t = w.cross(e) / denom;
        let u = w.cross(d) / denom;
        let slack = VERTEX_TOL / e.norm();
        if t > 0.0 && u >= -slack && u <= 1.0 + slack && best.is_none_or(|(bt, _)| t < bt) {
            best = Some((t, i));
        }
    }
    let (t, edge) = best.ok_or(BilliardError::NoIntersection)?;
    // rays through (or within VERTEX_TOL of) a vertex up to the hit point end the orbit
    for v in 0..n {
        let w = p.vertex(v) - x;
        let along = w.dot(d);
        if along > 0.0 && along <= t + VERTEX_TOL && d.cross(w).abs() < VERTEX_TOL {
            return Err(BilliardError::HitVertex { vertex: v, position: p.vertex(v) });
        }
    }
    let (a, b) = p.edge(edge);
    let e = b - a;
    if (d.cross(e) / e.norm()).abs() < TANGENT_TOL {
        return Err(BilliardError::Tangency { edge });
    }
    Ok((t, edge, x + d * t))
}

/// Flows to the next collision and reflects: the outgoing direction is the mirror image
/// of the incoming one across the edge line.
pub fn step(p: &Polygon, s: &UnitTangentState) -> Result<StepResult, BilliardError> {
    let (t, edge, hit) = first_hit(p, s.position, s.direction, s.edge)?;
    let (a, b) = p.edge(edge);
    let out = s.direction.reflect_across(b - a);
    Ok(StepResult { next: UnitTangentState::from_direction(hit, out, Some(edge)), dt: t, edge })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    HitVertex,
    Tangency,
    StepLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionEvent {
    /// Time of the collision since the start of the trajectory.
    pub time: f64,
    pub position: Vec2,
    pub theta_in: f64,
    pub theta_out: f64,
    pub edge: usize,
}

/// A finite piece of billiard orbit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub initial: UnitTangentState,
    pub events: Vec<CollisionEvent>,
    /// Flow time actually covered.
    pub total_time: f64,
    /// State at `total_time`.
    pub final_state: UnitTangentState,
    pub termination: Termination,
}

impl Trajectory {
    /// Number of straight pieces.
    pub fn segment_count(&self) -> usize {
        self.events.len() + 1
    }

    /// Straight piece `k` as `(t_start, t_end, start, unit direction)`.
    pub fn segment(&self, k: usize) -> (f64, f64, Vec2, Vec2) {
        let (t0, x0, d) = if k == 0 {
            (0.0, self.initial.position, self.initial.direction)
        } else {
            let e = &self.events[k - 1];
            (e.time, e.position, Vec2::from_angle(e.theta_out))
        };
        let t1 = if k < self.events.len() { self.events[k].time } else { self.total_time };
        (t0, t1, x0, d)
    }

    /// Iterator over the straight pieces.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, Vec2, Vec2)> + '_ {
        (0..self.segment_count()).map(move |k| self.segment(k))
    }

    /// State at time `t ∈ [0, total_time]`.
    pub fn state_at(&self, t: f64) -> UnitTangentState {
        let k = self.events.partition_point(|e| e.time <= t);
        let (t0, _, x0, d) = self.segment(k);
        UnitTangentState::from_direction(x0 + d * (t - t0), d, None)
    }
}

/// Runs the billiard flow for time `t_max` (the last segment is truncated), or until a
/// vertex/tangency or `max_steps` collisions.
pub fn flow(p: &Polygon, s: &UnitTangentState, t_max: f64, max_steps: usize) -> Trajectory {
    let mut events = Vec::new();
    let mut cur = *s;
    let mut time = 0.0;
    let mut termination = Termination::Completed;
    if t_max > 0.0 {
        loop {
            if events.len() >= max_steps {
                termination = Termination::StepLimit;
                break;
            }
            match step(p, &cur) {
                Ok(r) => {
                    if time + r.dt >= t_max {
                        let rest = t_max - time;
                        cur = UnitTangentState::from_direction(cur.advanced(rest), cur.direction, None);
                        time = t_max;
                        break;
                    }
                    time += r.dt;
                    events.push(CollisionEvent {
                        time,
                        position: r.next.position,
                        theta_in: cur.theta,
                        theta_out: r.next.theta,
                        edge: r.edge,
                    });
                    cur = r.next;
                }
                Err(BilliardError::HitVertex { .. }) => {
                    termination = Termination::HitVertex;
                    break;
                }
                Err(_) => {
                    termination = Termination::Tangency;
                    break;
                }
            }
        }
    }
    Trajectory { initial: *s, events, total_time: time, final_state: cur, termination }
}

/// CSV export with columns `event_index,t,x,y,theta_in,theta_out,edge`.
pub fn trajectory_csv(tr: &Trajectory) -> String {
    let mut out = String::from("event_index,t,x,y,theta_in,theta_out,edge\n");
    for (i, e) in tr.events.iter().enumerate() {
        out.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}\n",
            i, e.time, e.position.x, e.position.y, e.theta_in, e.theta_out, e.edge
        ));
    }
    out
}
