//! Ray walking through the cells of a translation surface.

use serde::Serialize;

use super::transversal::Transversal;
use super::FlowError;
use crate::billiard::VERTEX_TOL;
use crate::geometry::point::Vec2;
use crate::unfolding::TranslationSurface;

/// Minimum flow time before a transversal crossing counts.
pub(crate) const HIT_EPS: f64 = 1e-11;

/// Position inside (or on the boundary of) one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cursor {
    pub cell: usize,
    pub pos: Vec2,
    /// Edge the position lies on, when the ray enters through it.
    pub from_edge: Option<usize>,
    /// Cell vertex the ray starts from.
    pub at_vertex: Option<usize>,
}

impl Cursor {
    pub fn interior(cell: usize, pos: Vec2) -> Self {
        Cursor { cell, pos, from_edge: None, at_vertex: None }
    }
}

pub(crate) enum Exit {
    Edge { t: f64, edge: usize, point: Vec2 },
    Vertex { t: f64, vertex: usize },
}

pub(crate) fn cell_exit(s: &TranslationSurface, cur: &Cursor, d: Vec2) -> Result<Exit, FlowError> {
    let v = s.cell(cur.cell);
    let n = v.len();
    let excluded = |e: usize| Some(e) == cur.from_edge || cur.at_vertex.is_some_and(|k| e == k || e == (k + n - 1) % n);
    let mut best: Option<(f64, usize)> = None;
    for e in 0..n {
        if excluded(e) {
            continue;
        }
        let (a, b) = (v[e], v[(e + 1) % n]);
        let ed = b - a;
        let denom = d.cross(ed);
        if denom == 0.0 {
            continue;
        }
        let w = a - cur.pos;
        let t = w.cross(ed) / denom;
        let u = w.cross(d) / denom;
        let slack = VERTEX_TOL / ed.norm();
        if t > 0.0 && u >= -slack && u <= 1.0 + slack && best.is_none_or(|(bt, _)| t < bt) {
            best = Some((t, e));
        }
    }
    let (t, edge) = best.ok_or(FlowError::NoExit { cell: cur.cell })?;
    let mut vertex: Option<(f64, usize)> = None;
    for (k, &p) in v.iter().enumerate() {
        if Some(k) == cur.at_vertex {
            continue;
        }
        let w = p - cur.pos;
        let along = w.dot(d);
        if along > 0.0 && along <= t + VERTEX_TOL && d.cross(w).abs() < VERTEX_TOL && vertex.is_none_or(|(bt, _)| along < bt) {
            vertex = Some((along, k));
        }
    }
    Ok(match vertex {
        Some((t, vertex)) => Exit::Vertex { t, vertex },
        None => Exit::Edge { t, edge, point: cur.pos + d * t },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Stop {
    Horizon,
    Vertex { cell: usize, vertex: usize },
    Transversal { param: f64 },
    Budget,
}

pub(crate) struct WalkEnd {
    pub time: f64,
    pub cursor: Cursor,
    pub stop: Stop,
}

/// Closest crossing of the transversal inside the current cell at ray time in `(HIT_EPS, limit]`.
fn transversal_hit(j: &Transversal, cur: &Cursor, d: Vec2, limit: f64) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for piece in j.pieces_in(cur.cell) {
        let ab = piece.b - piece.a;
        let denom = d.cross(ab);
        if denom.abs() < 1e-15 {
            continue;
        }
        let w = piece.a - cur.pos;
        let t = w.cross(ab) / denom;
        let u = w.cross(d) / denom;
        let slack = 1e-12 / ab.norm();
        if t > HIT_EPS && t <= limit && (-slack..=1.0 + slack).contains(&u) && best.is_none_or(|(bt, _)| t < bt) {
            let param = (piece.s0 + u.clamp(0.0, 1.0) * (piece.s1 - piece.s0)).clamp(0.0, j.length());
            best = Some((t, param));
        }
    }
    best
}

/// Flows from `start` in unit direction `d` until `horizon`, a vertex, the transversal `j`,
/// or `max_crossings` edge crossings. `on_cross(time, edge, exit_point, new_cursor)` sees every crossing.
pub(crate) fn walk(
    s: &TranslationSurface,
    start: Cursor,
    d: Vec2,
    horizon: f64,
    j: Option<&Transversal>,
    max_crossings: usize,
    mut on_cross: impl FnMut(f64, usize, Vec2, &Cursor),
) -> Result<WalkEnd, FlowError> {
    let mut cur = start;
    let mut time = 0.0;
    let mut crossings = 0usize;
    loop {
        let exit = cell_exit(s, &cur, d)?;
        let seg = match exit {
            Exit::Edge { t, .. } | Exit::Vertex { t, .. } => t,
        };
        let remaining = horizon - time;
        if let Some(j) = j {
            let limit = (seg + HIT_EPS).min(remaining);
            if let Some((t, param)) = transversal_hit(j, &cur, d, limit) {
                let blocked = matches!(exit, Exit::Vertex { t: tv, .. } if t >= tv - HIT_EPS);
                if !blocked {
                    let cursor = match exit {
                        Exit::Edge { t: te, edge, point } if (t - te).abs() < HIT_EPS => {
                            let (pc, pe, tr) = s.partner(cur.cell, edge);
                            Cursor { cell: pc, pos: point + tr, from_edge: Some(pe), at_vertex: None }
                        }
                        _ => Cursor::interior(cur.cell, cur.pos + d * t),
                    };
                    return Ok(WalkEnd { time: time + t, cursor, stop: Stop::Transversal { param } });
                }
            }
        }
        if seg >= remaining {
            let cursor = Cursor::interior(cur.cell, cur.pos + d * remaining);
            return Ok(WalkEnd { time: horizon, cursor, stop: Stop::Horizon });
        }
        match exit {
            Exit::Vertex { t, vertex } => {
                let cursor = Cursor { cell: cur.cell, pos: s.cell(cur.cell)[vertex], from_edge: None, at_vertex: Some(vertex) };
                return Ok(WalkEnd { time: time + t, cursor, stop: Stop::Vertex { cell: cur.cell, vertex } });
            }
            Exit::Edge { t, edge, point } => {
                let (pc, pe, tr) = s.partner(cur.cell, edge);
                time += t;
                cur = Cursor { cell: pc, pos: point + tr, from_edge: Some(pe), at_vertex: None };
                crossings += 1;
                on_cross(time, edge, point, &cur);
                if crossings >= max_crossings {
                    return Ok(WalkEnd { time, cursor: cur, stop: Stop::Budget });
                }
            }
        }
    }
}

/// One gluing crossed by a surface trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub time: f64,
    pub from_cell: usize,
    pub edge: usize,
    pub to_cell: usize,
    /// Exit point in the old cell's coordinates.
    pub exit: Vec2,
    /// Entry point in the new cell's coordinates.
    pub position: Vec2,
}

/// Straight-line flow on a surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceTrajectory {
    pub start_cell: usize,
    pub start: Vec2,
    pub direction: Vec2,
    pub crossings: Vec<Crossing>,
    pub total_time: f64,
    pub end_cell: usize,
    pub end: Vec2,
    /// Cone point reached, if the orbit ended at one.
    pub hit_cone_point: Option<usize>,
}

impl SurfaceTrajectory {
    /// Displacement in the universal cover, summed cell by cell.
    pub fn holonomy(&self) -> Vec2 {
        let mut sum = Vec2::ZERO;
        let mut entry = self.start;
        for c in &self.crossings {
            sum += c.exit - entry;
            entry = c.position;
        }
        sum + (self.end - entry)
    }
}

/// Unit-speed flow at angle `theta` from `(cell, start)` for time `t`.
pub fn straight_line_flow(
    s: &TranslationSurface,
    theta: f64,
    cell: usize,
    start: Vec2,
    t: f64,
    max_crossings: usize,
) -> Result<SurfaceTrajectory, FlowError> {
    straight_line_flow_dir(s, Vec2::from_angle(theta), cell, start, t, max_crossings)
}

pub fn straight_line_flow_dir(
    s: &TranslationSurface,
    direction: Vec2,
    cell: usize,
    start: Vec2,
    t: f64,
    max_crossings: usize,
) -> Result<SurfaceTrajectory, FlowError> {
    if !(t >= 0.0) || cell >= s.cell_count() {
        return Err(FlowError::InvalidInput("flow time must be nonnegative and the cell must exist".into()));
    }
    if s.cell(cell).iter().any(|&v| v.dist(start) < VERTEX_TOL) {
        return Err(FlowError::StartsAtConePoint);
    }
    let d = direction.normalized();
    let mut cur = Cursor::interior(cell, start);
    // a start on an edge belongs to the cell the ray enters
    let v = s.cell(cell);
    let n = v.len();
    for e in 0..n {
        let (a, b) = (v[e], v[(e + 1) % n]);
        if crate::geometry::polygon::point_segment_distance(start, a, b) < VERTEX_TOL {
            if d.cross(b - a) < 0.0 {
                cur.from_edge = Some(e);
            } else {
                let (pc, pe, tr) = s.partner(cell, e);
                cur = Cursor { cell: pc, pos: start + tr, from_edge: Some(pe), at_vertex: None };
            }
            break;
        }
    }
    let mut crossings = Vec::new();
    let mut last_cell = cur.cell;
    let end = walk(s, cur, d, t, None, max_crossings, |time, edge, exit, c| {
        crossings.push(Crossing { time, from_cell: last_cell, edge, to_cell: c.cell, exit, position: c.pos });
        last_cell = c.cell;
    })?;
    let hit_cone_point = match end.stop {
        Stop::Vertex { cell, vertex } => Some(s.corner_class(cell, vertex)),
        Stop::Budget => return Err(FlowError::Budget(max_crossings)),
        _ => None,
    };
    Ok(SurfaceTrajectory {
        start_cell: cell,
        start,
        direction: d,
        crossings,
        total_time: end.time,
        end_cell: end.cursor.cell,
        end: end.cursor.pos,
        hit_cone_point,
    })
}
