//! δ-perturbations of a polygon and the piecewise-affine correspondence between them.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::point::{RatPoint, Vec2};
use super::polygon::{orient_f64, orient_rat, validate_polygon, validate_rational_polygon, Polygon};
use super::triangulate::{barycentric, triangulate, Triangulation};
use super::GeometryError;

/// Resampling budget when a perturbed polygon fails validation.
pub const MAX_PERTURB_ATTEMPTS: usize = 100;

/// Barycentric tolerance for deciding that a point belongs to a triangle.
const LOCATE_TOL: f64 = 1e-9;

/// A pair of polygons with matched vertices and a shared triangulation.
///
/// The map sends each triangle of the source affinely onto the corresponding triangle
/// of the target; it is a homeomorphism as long as every target triangle keeps its
/// orientation.
#[derive(Debug, Clone)]
pub struct PerturbationMap {
    source: Polygon,
    target: Polygon,
    triangulation: Triangulation,
    delta: f64,
    seed: u64,
}

impl PerturbationMap {
    /// Builds the correspondence for two polygons with matched vertex lists.
    pub fn new(source: Polygon, target: Polygon, triangulation: Triangulation, delta: f64, seed: u64) -> Result<Self, GeometryError> {
        if source.len() != target.len() {
            return Err(GeometryError::VertexCountMismatch(source.len(), target.len()));
        }
        for t in &triangulation.triangles {
            let ok = match (source.exact_vertices(), target.exact_vertices()) {
                (_, Some(e)) => orient_rat(&e[t[0]], &e[t[1]], &e[t[2]]) > 0,
                _ => {
                    let v = target.vertices();
                    orient_f64(v[t[0]], v[t[1]], v[t[2]]) > 0
                }
            };
            if !ok {
                return Err(GeometryError::TriangulationBroken);
            }
        }
        Ok(PerturbationMap { source, target, triangulation, delta, seed })
    }

    pub fn identity(p: &Polygon) -> Self {
        let tri = triangulate(p);
        PerturbationMap { source: p.clone(), target: p.clone(), triangulation: tri, delta: 0.0, seed: 0 }
    }

    pub fn source(&self) -> &Polygon {
        &self.source
    }

    pub fn target(&self) -> &Polygon {
        &self.target
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The map from target back to source.
    pub fn inverse(&self) -> PerturbationMap {
        PerturbationMap {
            source: self.target.clone(),
            target: self.source.clone(),
            triangulation: self.triangulation.clone(),
            delta: self.delta,
            seed: self.seed,
        }
    }

    /// Largest vertex displacement.
    pub fn max_vertex_displacement(&self) -> f64 {
        self.source.vertices().iter().zip(self.target.vertices()).map(|(a, b)| a.dist(*b)).fold(0.0, f64::max)
    }

    /// Image of `x` under the affine map of the triangle containing it.
    pub fn map_point(&self, x: Vec2) -> Result<Vec2, GeometryError> {
        let (i, b) =
            self.triangulation.locate(self.source.vertices(), x, LOCATE_TOL).ok_or(GeometryError::OutsidePolygon { x: x.x, y: x.y })?;
        Ok(self.apply_in_triangle(i, b))
    }

    /// Image of `x` computed from a chosen triangle's affine map (no containment check).
    pub fn map_point_in_triangle(&self, tri: usize, x: Vec2) -> Vec2 {
        let t = self.triangulation.triangles[tri];
        let s = self.source.vertices();
        self.apply_in_triangle(tri, barycentric(s[t[0]], s[t[1]], s[t[2]], x))
    }

    fn apply_in_triangle(&self, tri: usize, b: [f64; 3]) -> Vec2 {
        let t = self.triangulation.triangles[tri];
        let q = self.target.vertices();
        q[t[0]] * b[0] + q[t[1]] * b[1] + q[t[2]] * b[2]
    }

    /// Exact image of a rational point; requires exact coordinates on both polygons.
    pub fn map_point_exact(&self, x: &RatPoint) -> Result<RatPoint, GeometryError> {
        let (s, q) = match (self.source.exact_vertices(), self.target.exact_vertices()) {
            (Some(s), Some(q)) => (s, q),
            _ => return Err(GeometryError::NotExact),
        };
        for t in &self.triangulation.triangles {
            let (a, b, c) = (&s[t[0]], &s[t[1]], &s[t[2]]);
            let det = b.sub(a).cross(&c.sub(a));
            let l1 = b.sub(x).cross(&c.sub(x)) / &det;
            let l2 = c.sub(x).cross(&a.sub(x)) / &det;
            let l3 = BigRational::from_integer(1.into()) - &l1 - &l2;
            if l1 >= BigRational::zero() && l2 >= BigRational::zero() && l3 >= BigRational::zero() {
                return Ok(q[t[0]].scale(&l1).add(&q[t[1]].scale(&l2)).add(&q[t[2]].scale(&l3)));
            }
        }
        let f = x.to_f64();
        Err(GeometryError::OutsidePolygon { x: f.x, y: f.y })
    }
}

/// Unit-disk offsets for each vertex; scaling by δ gives the displacements.
fn unit_disk_offsets(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|_| {
            let r: f64 = rng.gen::<f64>().sqrt();
            let a: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            Vec2::from_angle(a) * r
        })
        .collect()
}

/// Draws a δ-perturbation: every vertex moves by an independent uniform sample of the
/// disk of radius `delta`, the triangulation of `p` is carried over.
///
/// The same seed yields displacements that scale linearly with `delta`.
pub fn perturb(p: &Polygon, delta: f64, seed: u64) -> Result<PerturbationMap, GeometryError> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(GeometryError::InvalidDelta(delta));
    }
    let limit = p.min_vertex_distance() / 2.0;
    if delta >= limit {
        return Err(GeometryError::DeltaTooLarge { delta, limit });
    }
    let tri = triangulate(p);
    if delta == 0.0 {
        return PerturbationMap::new(p.clone(), p.clone(), tri, 0.0, seed);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_PERTURB_ATTEMPTS {
        let offsets = unit_disk_offsets(&mut rng, p.len());
        let target = match p.exact_vertices() {
            Some(e) => {
                let pts: Option<Vec<RatPoint>> =
                    e.iter().zip(&offsets).map(|(v, o)| RatPoint::from_f64(*o * delta).map(|d| v.add(&d))).collect();
                match pts.map(validate_rational_polygon) {
                    Some(Ok(q)) => q,
                    _ => continue,
                }
            }
            None => {
                let pts: Vec<Vec2> = p.vertices().iter().zip(&offsets).map(|(v, o)| *v + *o * delta).collect();
                match validate_polygon(&pts) {
                    Ok(q) => q,
                    Err(_) => continue,
                }
            }
        };
        // validation may reorder a clockwise result; matched vertices must stay aligned
        if target.vertex(0).dist(p.vertex(0)) > delta * (1.0 + 1e-12) {
            continue;
        }
        if let Ok(m) = PerturbationMap::new(p.clone(), target, tri.clone(), delta, seed) {
            return Ok(m);
        }
    }
    Err(GeometryError::PerturbationFailed { attempts: MAX_PERTURB_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon::{polygon_from_tuples, unit_square};

    fn l_shape() -> Polygon {
        polygon_from_tuples(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]).unwrap()
    }

    #[test]
    fn zero_delta_is_identity() {
        let p = l_shape();
        let m = perturb(&p, 0.0, 7).unwrap();
        assert_eq!(m.target(), &p);
        let x = Vec2::new(0.3, 1.7);
        assert!(m.map_point(x).unwrap().dist(x) < 1e-15);
    }

    #[test]
    fn vertices_within_delta() {
        let m = perturb(&unit_square(), 0.01, 42).unwrap();
        assert!(m.max_vertex_displacement() <= 0.01);
        assert!(m.max_vertex_displacement() > 0.0);
    }

    #[test]
    fn delta_bound_enforced() {
        let e = perturb(&unit_square(), 0.6, 1).unwrap_err();
        match e {
            GeometryError::DeltaTooLarge { limit, .. } => assert_eq!(limit, 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn vertices_and_barycenters_map() {
        let p = l_shape();
        let m = perturb(&p, 0.05, 3).unwrap();
        for i in 0..p.len() {
            assert!(m.map_point(p.vertex(i)).unwrap().dist(m.target().vertex(i)) < 1e-12);
        }
        for t in &m.triangulation().triangles {
            let s = p.vertices();
            let q = m.target().vertices();
            let bs = (s[t[0]] + s[t[1]] + s[t[2]]) * (1.0 / 3.0);
            let bq = (q[t[0]] + q[t[1]] + q[t[2]]) * (1.0 / 3.0);
            assert!(m.map_point(bs).unwrap().dist(bq) < 1e-12);
        }
    }

    #[test]
    fn continuous_across_diagonals() {
        let p = l_shape();
        let m = perturb(&p, 0.05, 11).unwrap();
        let tris = &m.triangulation().triangles;
        for (a, b) in m.triangulation().diagonals(p.len()) {
            let owners: Vec<usize> = (0..tris.len()).filter(|&i| tris[i].contains(&a) && tris[i].contains(&b)).collect();
            assert_eq!(owners.len(), 2);
            for s in [0.1, 0.37, 0.5, 0.93] {
                let x = p.vertex(a) + (p.vertex(b) - p.vertex(a)) * s;
                let y0 = m.map_point_in_triangle(owners[0], x);
                let y1 = m.map_point_in_triangle(owners[1], x);
                assert!(y0.dist(y1) < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_round_trip_float() {
        let p = l_shape();
        let m = perturb(&p, 0.05, 5).unwrap();
        let inv = m.inverse();
        for i in 0..=20 {
            for j in 0..=20 {
                let x = Vec2::new(2.0 * i as f64 / 20.0, 2.0 * j as f64 / 20.0);
                if !p.contains(x, 0.0) {
                    continue;
                }
                let y = m.map_point(x).unwrap();
                let back = inv.map_point(y).unwrap();
                assert!(back.dist(x) < 1e-10, "{x:?} -> {back:?}");
            }
        }
    }

    #[test]
    fn inverse_round_trip_exact() {
        let p = unit_square();
        let m = perturb(&p, 0.01, 9).unwrap();
        let inv = m.inverse();
        for (a, b) in [(1, 3), (1, 2), (5, 7), (0, 1)] {
            let x = RatPoint::new(BigRational::new(a.into(), 8.into()), BigRational::new(b.into(), 8.into()));
            let y = m.map_point_exact(&x).unwrap();
            assert_eq!(inv.map_point_exact(&y).unwrap(), x);
        }
    }

    #[test]
    fn outside_rejected() {
        let m = perturb(&unit_square(), 0.01, 9).unwrap();
        assert!(matches!(m.map_point(Vec2::new(1.5, 0.5)), Err(GeometryError::OutsidePolygon { .. })));
    }

    #[test]
    fn displacement_bounded_by_delta_multiple() {
        let p = l_shape();
        for seed in 0..5 {
            let m = perturb(&p, 0.01, seed).unwrap();
            for i in 0..50 {
                let x = Vec2::new(0.05 + 0.9 * ((i * 7) % 50) as f64 / 50.0, 0.05 + 1.9 * i as f64 / 50.0);
                if let Ok(y) = m.map_point(x) {
                    assert!(y.dist(x) <= 0.01 + 1e-12);
                }
            }
        }
    }
}
