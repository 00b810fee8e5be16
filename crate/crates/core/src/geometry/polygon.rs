//! Simple polygons: validation, orientation, interior angles.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::point::{rat_sign, RatPoint, Vec2};
use super::GeometryError;

/// Coordinate arithmetic used for polygon predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    /// Exact rational coordinates; all predicates are exact.
    Rational,
    /// binary64 coordinates with epsilon guards.
    #[default]
    Float,
}

/// Relative epsilon for float orientation tests.
pub(crate) const ORIENT_EPS: f64 = 1e-12;

/// Index-based predicates shared by validation and triangulation.
pub(crate) trait PointSet {
    fn len(&self) -> usize;
    /// Sign of the turn `i -> j -> k`: 1 left, -1 right, 0 collinear.
    fn orient(&self, i: usize, j: usize, k: usize) -> i32;
    /// Whether point `k` lies in the bounding box of `i`, `j` (used for collinear cases).
    fn in_box(&self, i: usize, j: usize, k: usize) -> bool;
    fn same(&self, i: usize, j: usize) -> bool;
}

impl PointSet for [Vec2] {
    fn len(&self) -> usize {
        <[Vec2]>::len(self)
    }
    fn orient(&self, i: usize, j: usize, k: usize) -> i32 {
        orient_f64(self[i], self[j], self[k])
    }
    fn in_box(&self, i: usize, j: usize, k: usize) -> bool {
        let (a, b, c) = (self[i], self[j], self[k]);
        c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
    }
    fn same(&self, i: usize, j: usize) -> bool {
        self[i] == self[j]
    }
}

impl PointSet for [RatPoint] {
    fn len(&self) -> usize {
        <[RatPoint]>::len(self)
    }
    fn orient(&self, i: usize, j: usize, k: usize) -> i32 {
        orient_rat(&self[i], &self[j], &self[k])
    }
    fn in_box(&self, i: usize, j: usize, k: usize) -> bool {
        let (a, b, c) = (&self[i], &self[j], &self[k]);
        let within = |p: &BigRational, q: &BigRational, r: &BigRational| (r >= p && r <= q) || (r >= q && r <= p);
        within(&a.x, &b.x, &c.x) && within(&a.y, &b.y, &c.y)
    }
    fn same(&self, i: usize, j: usize) -> bool {
        self[i] == self[j]
    }
}

/// Orientation with a relative epsilon guard.
pub fn orient_f64(a: Vec2, b: Vec2, c: Vec2) -> i32 {
    let u = b - a;
    let v = c - a;
    let det = u.cross(v);
    let scale = u.norm() * v.norm();
    if det.abs() <= ORIENT_EPS * scale {
        0
    } else if det > 0.0 {
        1
    } else {
        -1
    }
}

pub fn orient_rat(a: &RatPoint, b: &RatPoint, c: &RatPoint) -> i32 {
    rat_sign(&b.sub(a).cross(&c.sub(a)))
}

/// Closed-segment intersection between `[a, b]` and `[c, d]` by index.
pub(crate) fn segments_touch<P: PointSet + ?Sized>(pts: &P, a: usize, b: usize, c: usize, d: usize) -> bool {
    let o1 = pts.orient(a, b, c);
    let o2 = pts.orient(a, b, d);
    let o3 = pts.orient(c, d, a);
    let o4 = pts.orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && pts.in_box(a, b, c))
        || (o2 == 0 && pts.in_box(a, b, d))
        || (o3 == 0 && pts.in_box(c, d, a))
        || (o4 == 0 && pts.in_box(c, d, b))
}

/// A validated simple polygon with counterclockwise vertex order.
#[derive(Debug, Clone)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    exact: Option<Vec<RatPoint>>,
    angles: Vec<f64>,
    area: f64,
}

impl PartialEq for Polygon {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.exact == other.exact
    }
}

fn check_structure<P: PointSet + ?Sized>(pts: &P) -> Result<(), GeometryError> {
    let n = pts.len();
    if n < 3 {
        return Err(GeometryError::TooFewVertices(n));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if pts.same(i, j) {
                return Err(GeometryError::RepeatedVertex { first: i, second: j });
            }
        }
    }
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let next = (i + 1) % n;
        if pts.orient(prev, i, next) == 0 {
            return Err(GeometryError::Degenerate { vertex: i });
        }
    }
    for i in 0..n {
        let i2 = (i + 1) % n;
        for j in (i + 1)..n {
            let j2 = (j + 1) % n;
            if j == i2 || j2 == i {
                continue;
            }
            if segments_touch(pts, i, i2, j, j2) {
                return Err(GeometryError::SelfIntersecting { edge_a: i, edge_b: j });
            }
        }
    }
    Ok(())
}

fn signed_area_f64(v: &[Vec2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

pub(crate) fn signed_area_rat(v: &[RatPoint]) -> BigRational {
    let n = v.len();
    let two = BigRational::from_integer(2.into());
    (0..n).fold(BigRational::zero(), |acc, i| acc + v[i].cross(&v[(i + 1) % n])) / two
}

/// Validates a float polygon; clockwise input is reversed to counterclockwise.
pub fn validate_polygon(points: &[Vec2]) -> Result<Polygon, GeometryError> {
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    check_structure(points)?;
    let mut vertices = points.to_vec();
    let mut area = signed_area_f64(&vertices);
    if area < 0.0 {
        vertices.reverse();
        area = -area;
    }
    Ok(Polygon::assemble(vertices, None, area))
}

/// Validates an exact polygon. All predicates are evaluated in rational arithmetic.
pub fn validate_rational_polygon(points: Vec<RatPoint>) -> Result<Polygon, GeometryError> {
    check_structure(points.as_slice())?;
    let mut points = points;
    let mut area = signed_area_rat(&points);
    if area.is_negative() {
        points.reverse();
        area = -area;
    }
    let floats = points.iter().map(RatPoint::to_f64).collect();
    Ok(Polygon::assemble(floats, Some(points), super::point::rat_to_f64(&area)))
}

impl Polygon {
    fn assemble(vertices: Vec<Vec2>, exact: Option<Vec<RatPoint>>, area: f64) -> Polygon {
        let n = vertices.len();
        let angles = (0..n)
            .map(|i| {
                let v = vertices[i];
                let a = vertices[(i + 1) % n] - v;
                let b = vertices[(i + n - 1) % n] - v;
                let t = a.cross(b).atan2(a.dot(b));
                if t <= 0.0 {
                    t + 2.0 * PI
                } else {
                    t
                }
            })
            .collect();
        Polygon { vertices, exact, angles, area }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vec2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Exact coordinates, present in rational mode.
    pub fn exact_vertices(&self) -> Option<&[RatPoint]> {
        self.exact.as_deref()
    }

    pub fn mode(&self) -> ArithmeticMode {
        if self.exact.is_some() {
            ArithmeticMode::Rational
        } else {
            ArithmeticMode::Float
        }
    }

    /// Interior angle at each vertex, radians in `(0, 2π)`.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn exact_area(&self) -> Option<BigRational> {
        self.exact.as_ref().map(|v| signed_area_rat(v))
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Vec2, Vec2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn is_convex(&self) -> bool {
        self.angles.iter().all(|&a| a < PI)
    }

    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    /// Minimum nonzero distance between two vertices.
    pub fn min_vertex_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                let e = a.dist(*b);
                if e > 0.0 {
                    d = d.min(e);
                }
            }
        }
        d
    }

    /// Even-odd containment test; boundary points count as inside within `tol`.
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        if self.boundary_distance(p) <= tol {
            return true;
        }
        let n = self.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Euclidean distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                point_segment_distance(p, a, b)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Returns a copy scaled about the origin so that the area is one.
    pub fn normalized_to_unit_area(&self) -> Polygon {
        let k = 1.0 / self.area.sqrt();
        let v: Vec<Vec2> = self.vertices.iter().map(|&p| p * k).collect();
        let area = signed_area_f64(&v);
        Polygon::assemble(v, None, area)
    }

    /// Index-level predicates over the best available coordinates.
    pub(crate) fn orient_idx(&self, i: usize, j: usize, k: usize) -> i32 {
        match &self.exact {
            Some(e) => e.as_slice().orient(i, j, k),
            None => self.vertices.as_slice().orient(i, j, k),
        }
    }
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sq();
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / l2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Convenience constructor for tests and examples.
pub fn polygon_from_tuples(pts: &[(f64, f64)]) -> Result<Polygon, GeometryError> {
    let v: Vec<Vec2> = pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
    validate_polygon(&v)
}

/// Axis-aligned unit square with exact coordinates.
pub fn unit_square() -> Polygon {
    validate_rational_polygon(vec![
        RatPoint::from_ints(0, 0),
        RatPoint::from_ints(1, 0),
        RatPoint::from_ints(1, 1),
        RatPoint::from_ints(0, 1),
    ])
    .expect("unit square is valid")
}

/// Triangle with the given interior angles (radians) at its first two vertices,
/// base from (0,0) to (1,0).
pub fn triangle_from_angles(a: f64, b: f64) -> Result<Polygon, GeometryError> {
    // apex from the law of sines
    let c = PI - a - b;
    let side = b.sin() / c.sin();
    let apex = Vec2::new(side * a.cos(), side * a.sin());
    validate_polygon(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), apex])
}
