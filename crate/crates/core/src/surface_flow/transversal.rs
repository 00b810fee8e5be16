//! Straight transversal segments anchored at a cone point.

use serde::Serialize;
use std::f64::consts::TAU;

use super::walk::{cell_exit, Cursor, Exit};
use super::FlowError;
use crate::geometry::point::Vec2;
use crate::unfolding::{corner_angles, TranslationSurface};

pub(crate) const ANG_TOL: f64 = 1e-12;
const LEN_TOL: f64 = 1e-12;

/// Part of a transversal inside one cell, covering parameters `[s0, s1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub cell: usize,
    pub a: Vec2,
    pub b: Vec2,
    pub s0: f64,
    pub s1: f64,
    /// Set when the piece runs along a cell edge (it is then listed in both adjacent cells).
    pub edge: Option<usize>,
}

/// Segment `anchor + s·direction`, `0 ≤ s ≤ length`, developed across cells.
#[derive(Debug, Clone, Serialize)]
pub struct Transversal {
    anchor: usize,
    corner: (usize, usize),
    direction: Vec2,
    length: f64,
    pieces: Vec<Piece>,
    by_cell: Vec<Vec<usize>>,
    end_at_vertex: bool,
}

/// CCW angle from the outgoing edge of corner `(c, v)` to `dir`, in `[0, 2π)`.
pub(crate) fn corner_offset(s: &TranslationSurface, c: usize, v: usize, dir: Vec2) -> f64 {
    let cell = s.cell(c);
    let e = cell[(v + 1) % cell.len()] - cell[v];
    let mut a = e.cross(dir).atan2(e.dot(dir));
    if a < 0.0 {
        a += TAU;
    }
    if a > TAU - ANG_TOL {
        a = 0.0;
    }
    a
}

/// Corners of cone point `cp` whose half-open wedge `[outgoing edge, incoming edge)` contains `dir`,
/// with the angle offset inside the wedge.
pub(crate) fn corners_containing(s: &TranslationSurface, cp: usize, dir: Vec2) -> Vec<(usize, usize, f64)> {
    s.cone_points()[cp]
        .corners
        .iter()
        .filter_map(|&(c, v)| {
            let a = corner_offset(s, c, v, dir);
            let interior = corner_angles(s.cell(c))[v];
            (a < interior - ANG_TOL).then_some((c, v, a))
        })
        .collect()
}

impl Transversal {
    /// Segment leaving cone point `anchor` in `direction` (unit vector after normalization);
    /// when the cone angle exceeds 2π the first matching corner is used.
    pub fn new(s: &TranslationSurface, anchor: usize, direction: Vec2, length: f64) -> Result<Self, FlowError> {
        Self::with_prong(s, anchor, 0, direction, length)
    }

    /// As [`Transversal::new`], choosing the `prong`-th corner whose wedge contains `direction`.
    pub fn with_prong(s: &TranslationSurface, anchor: usize, prong: usize, direction: Vec2, length: f64) -> Result<Self, FlowError> {
        if anchor >= s.cone_points().len() || !(length > 0.0) || !length.is_finite() {
            return Err(FlowError::BadTransversal("anchor must exist and length must be positive".into()));
        }
        let j = direction.normalized();
        let corners = corners_containing(s, anchor, j);
        let &(c, v, offset) = corners.get(prong).ok_or_else(|| FlowError::BadTransversal(format!("no prong {prong} in that direction")))?;
        let mut pieces = Vec::new();
        let mut end_at_vertex = false;
        if offset < ANG_TOL {
            // along the outgoing edge
            let (a, b) = s.edge(c, v);
            let le = (b - a).norm();
            if length > le + LEN_TOL {
                return Err(FlowError::BadTransversal("transversal passes through a cone point".into()));
            }
            end_at_vertex = (length - le).abs() <= LEN_TOL;
            let end = if end_at_vertex { b } else { a + j * length };
            let (pc, pe, tr) = s.partner(c, v);
            pieces.push(Piece { cell: c, a, b: end, s0: 0.0, s1: length, edge: Some(v) });
            pieces.push(Piece { cell: pc, a: a + tr, b: end + tr, s0: 0.0, s1: length, edge: Some(pe) });
        } else {
            let mut cur = Cursor { cell: c, pos: s.cell(c)[v], from_edge: None, at_vertex: Some(v) };
            let mut done = 0.0;
            loop {
                let remaining = length - done;
                match cell_exit(s, &cur, j)? {
                    Exit::Vertex { t, vertex } => {
                        if t < remaining - LEN_TOL {
                            return Err(FlowError::BadTransversal("transversal passes through a cone point".into()));
                        }
                        if t <= remaining + LEN_TOL {
                            end_at_vertex = true;
                            let b = s.cell(cur.cell)[vertex];
                            pieces.push(Piece { cell: cur.cell, a: cur.pos, b, s0: done, s1: length, edge: None });
                        } else {
                            pieces.push(Piece { cell: cur.cell, a: cur.pos, b: cur.pos + j * remaining, s0: done, s1: length, edge: None });
                        }
                        break;
                    }
                    Exit::Edge { t, edge, point } => {
                        if t >= remaining {
                            pieces.push(Piece { cell: cur.cell, a: cur.pos, b: cur.pos + j * remaining, s0: done, s1: length, edge: None });
                            break;
                        }
                        pieces.push(Piece { cell: cur.cell, a: cur.pos, b: point, s0: done, s1: done + t, edge: None });
                        done += t;
                        let (pc, pe, tr) = s.partner(cur.cell, edge);
                        cur = Cursor { cell: pc, pos: point + tr, from_edge: Some(pe), at_vertex: None };
                    }
                }
            }
        }
        let mut by_cell = vec![Vec::new(); s.cell_count()];
        for (i, p) in pieces.iter().enumerate() {
            by_cell[p.cell].push(i);
        }
        let t = Transversal { anchor, corner: (c, v), direction: j, length, pieces, by_cell, end_at_vertex };
        t.check_embedded()?;
        Ok(t)
    }

    /// Segment perpendicular to the unit flow direction `flow`, turned clockwise from it.
    pub fn perpendicular(s: &TranslationSurface, flow: Vec2, anchor: usize, length: f64) -> Result<Self, FlowError> {
        let f = flow.normalized();
        Self::new(s, anchor, Vec2::new(f.y, -f.x), length)
    }

    /// Same anchor and corner, shorter length.
    pub fn truncated(&self, s: &TranslationSurface, length: f64) -> Result<Self, FlowError> {
        let prong = corners_containing(s, self.anchor, self.direction).iter().position(|&(c, v, _)| (c, v) == self.corner).unwrap_or(0);
        Self::with_prong(s, self.anchor, prong, self.direction, length)
    }

    fn check_embedded(&self) -> Result<(), FlowError> {
        for (i, p) in self.pieces.iter().enumerate() {
            for q in &self.pieces[i + 1..] {
                if p.cell != q.cell || (p.s0 == q.s0 && p.s1 == q.s1) {
                    continue;
                }
                let collinear = self.direction.cross(q.a - p.a).abs() < 1e-12;
                if collinear {
                    let (p0, p1) = (p.a.dot(self.direction), p.b.dot(self.direction));
                    let (q0, q1) = (q.a.dot(self.direction), q.b.dot(self.direction));
                    if p1.min(q1) - p0.max(q0) > 1e-12 {
                        return Err(FlowError::BadTransversal("transversal overlaps itself".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    /// `(cell, vertex)` the segment starts from.
    pub fn corner(&self) -> (usize, usize) {
        self.corner
    }

    pub fn direction(&self) -> Vec2 {
        self.direction
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn end_at_vertex(&self) -> bool {
        self.end_at_vertex
    }

    pub(crate) fn pieces_in(&self, cell: usize) -> impl Iterator<Item = &Piece> {
        self.by_cell[cell].iter().map(move |&i| &self.pieces[i])
    }

    /// Cursor at parameter `sigma` from which a ray in direction `d` leaves the segment.
    pub(crate) fn cursor_at(&self, s: &TranslationSurface, sigma: f64, d: Vec2) -> Cursor {
        let mut fallback = None;
        for p in &self.pieces {
            if sigma < p.s0 - 1e-15 || sigma > p.s1 + 1e-15 {
                continue;
            }
            let u = if p.s1 > p.s0 { (sigma - p.s0) / (p.s1 - p.s0) } else { 0.0 };
            let pos = p.a + (p.b - p.a) * u;
            match p.edge {
                Some(e) => {
                    let (a, b) = s.edge(p.cell, e);
                    if d.cross(b - a) >= 0.0 {
                        // `d` points into the partner cell
                        continue;
                    }
                    return Cursor { cell: p.cell, pos, from_edge: Some(e), at_vertex: None };
                }
                None => {
                    let interior = sigma > p.s0 && sigma < p.s1;
                    if interior {
                        return Cursor::interior(p.cell, pos);
                    }
                    fallback.get_or_insert(Cursor::interior(p.cell, pos));
                }
            }
        }
        fallback.unwrap_or_else(|| Cursor::interior(self.pieces[0].cell, self.pieces[0].a))
    }

    /// Point at parameter `sigma` as `(cell, position)`.
    pub fn point(&self, sigma: f64) -> (usize, Vec2) {
        let p = self.pieces.iter().find(|p| sigma >= p.s0 && sigma <= p.s1).unwrap_or(&self.pieces[self.pieces.len() - 1]);
        let u = if p.s1 > p.s0 { (sigma - p.s0) / (p.s1 - p.s0) } else { 0.0 };
        (p.cell, p.a + (p.b - p.a) * u)
    }
}
