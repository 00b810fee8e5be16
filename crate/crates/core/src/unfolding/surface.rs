//! Translation surfaces as planar polygons glued edge-to-edge by translations.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::UnfoldError;
use crate::geometry::point::Vec2;
use crate::surface_flow::Mat2;

/// Tolerance for gluing consistency (parallel, equal length, translation agreement).
pub const GLUE_TOL: f64 = 1e-9;

/// Edge `edge_a` of `cell_a` is identified with edge `edge_b` of `cell_b`:
/// a point `x` on the first corresponds to `x + translation` on the second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gluing {
    pub cell_a: usize,
    pub edge_a: usize,
    pub cell_b: usize,
    pub edge_b: usize,
    pub translation: Vec2,
}

/// A vertex class of the glued complex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    /// `(cell, vertex)` corners belonging to the class.
    pub corners: Vec<(usize, usize)>,
    /// Total angle in radians.
    pub angle: f64,
    /// Cone angle divided by 2π (1 for a marked point).
    pub multiplicity: u32,
}

impl ConePoint {
    /// Order of the zero of the Abelian differential (0 for a marked point).
    pub fn order(&self) -> u32 {
        self.multiplicity - 1
    }
}

/// Group element `(k, reflected)` of the dihedral group attached to a rational polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub k: u64,
    pub reflected: bool,
}

/// Bookkeeping that ties an unfolded surface back to its table.
#[derive(Debug, Clone)]
pub struct UnfoldingData {
    pub polygon: crate::geometry::Polygon,
    pub rotation_order: u64,
    /// Direction angle of the polygon's first edge.
    pub base_angle: f64,
    pub elements: Vec<GroupElement>,
    /// Per cell: polygon vertex index of each cell vertex.
    pub polygon_vertex: Vec<Vec<usize>>,
    /// Per cell: polygon edge index of each cell edge.
    pub polygon_edge: Vec<Vec<usize>>,
    /// Index of the identity cell.
    pub identity_cell: usize,
}

impl UnfoldingData {
    /// Linear part of a group element.
    pub fn linear(&self, g: GroupElement) -> Mat2 {
        let m = self.rotation_order as f64;
        if g.reflected {
            Mat2::rotation(2.0 * self.base_angle + TAU * g.k as f64 / m) * Mat2::new(1.0, 0.0, 0.0, -1.0)
        } else {
            Mat2::rotation(TAU * g.k as f64 / m)
        }
    }

    pub fn cell_linear(&self, cell: usize) -> Mat2 {
        self.linear(self.elements[cell])
    }
}

#[derive(Debug, Clone)]
pub struct TranslationSurface {
    cells: Vec<Vec<Vec2>>,
    /// `partner[c][e] = (cell, edge, translation)`.
    partner: Vec<Vec<(usize, usize, Vec2)>>,
    cone_points: Vec<ConePoint>,
    /// `corner_class[c][v]` = index into `cone_points`.
    corner_class: Vec<Vec<usize>>,
    genus: u32,
    area: f64,
    unfolding: Option<UnfoldingData>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn cell_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

/// Interior angle at each vertex of a counterclockwise polygon.
pub(crate) fn corner_angles(v: &[Vec2]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let a = v[(i + 1) % n] - v[i];
            let b = v[(i + n - 1) % n] - v[i];
            let t = a.cross(b).atan2(a.dot(b));
            if t <= 0.0 {
                t + TAU
            } else {
                t
            }
        })
        .collect()
}

impl TranslationSurface {
    /// Assembles and checks a surface: every edge glued exactly once, glued edges
    /// antiparallel of equal length with a consistent translation, cone angles multiples of 2π.
    pub fn new(cells: Vec<Vec<Vec2>>, gluings: &[Gluing]) -> Result<Self, UnfoldError> {
        for (c, v) in cells.iter().enumerate() {
            if v.len() < 3 || cell_area(v) <= 0.0 {
                return Err(UnfoldError::BadCell(c));
            }
        }
        let mut partner: Vec<Vec<Option<(usize, usize, Vec2)>>> = cells.iter().map(|v| vec![None; v.len()]).collect();
        for g in gluings {
            let ok_idx = |c: usize, e: usize| c < cells.len() && e < cells[c].len();
            if !ok_idx(g.cell_a, g.edge_a) || !ok_idx(g.cell_b, g.edge_b) {
                return Err(UnfoldError::BadGluing(format!("index out of range in {g:?}")));
            }
            if (g.cell_a, g.edge_a) == (g.cell_b, g.edge_b) {
                return Err(UnfoldError::BadGluing(format!("edge glued to itself in {g:?}")));
            }
            for (c, e, pc, pe, t) in
                [(g.cell_a, g.edge_a, g.cell_b, g.edge_b, g.translation), (g.cell_b, g.edge_b, g.cell_a, g.edge_a, -g.translation)]
            {
                if partner[c][e].is_some() {
                    return Err(UnfoldError::BadGluing(format!("edge ({c}, {e}) glued twice")));
                }
                partner[c][e] = Some((pc, pe, t));
            }
            let (a0, a1) = edge_of(&cells[g.cell_a], g.edge_a);
            let (b0, b1) = edge_of(&cells[g.cell_b], g.edge_b);
            let scale = 1.0 + (a1 - a0).norm();
            if ((a1 - a0) + (b1 - b0)).norm() > GLUE_TOL * scale || (a0 + g.translation).dist(b1) > GLUE_TOL * scale {
                return Err(UnfoldError::BadGluing(format!("edges of {g:?} do not match by translation")));
            }
        }
        let partner: Vec<Vec<(usize, usize, Vec2)>> = partner
            .into_iter()
            .enumerate()
            .map(|(c, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(e, p)| p.ok_or_else(|| UnfoldError::BadGluing(format!("edge ({c}, {e}) is unglued"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;

        // vertex classes: start of an edge is identified with the end of its partner edge
        let offsets: Vec<usize> = cells
            .iter()
            .scan(0, |acc, v| {
                let o = *acc;
                *acc += v.len();
                Some(o)
            })
            .collect();
        let total: usize = cells.iter().map(Vec::len).sum();
        let mut parent: Vec<usize> = (0..total).collect();
        for (c, row) in partner.iter().enumerate() {
            let n = cells[c].len();
            for (e, &(pc, pe, _)) in row.iter().enumerate() {
                let pn = cells[pc].len();
                let a = find(&mut parent, offsets[c] + e);
                let b = find(&mut parent, offsets[pc] + (pe + 1) % pn);
                parent[a] = b;
                let a = find(&mut parent, offsets[c] + (e + 1) % n);
                let b = find(&mut parent, offsets[pc] + pe);
                parent[a] = b;
            }
        }
        let mut class_of_root = std::collections::BTreeMap::new();
        let mut cone_points: Vec<ConePoint> = Vec::new();
        let mut corner_class = Vec::with_capacity(cells.len());
        for (c, v) in cells.iter().enumerate() {
            let angles = corner_angles(v);
            let mut row = Vec::with_capacity(v.len());
            for (i, &ang) in angles.iter().enumerate() {
                let r = find(&mut parent, offsets[c] + i);
                let idx = *class_of_root.entry(r).or_insert_with(|| {
                    cone_points.push(ConePoint { corners: Vec::new(), angle: 0.0, multiplicity: 0 });
                    cone_points.len() - 1
                });
                cone_points[idx].corners.push((c, i));
                cone_points[idx].angle += ang;
                row.push(idx);
            }
            corner_class.push(row);
        }
        for cp in &mut cone_points {
            let k = (cp.angle / TAU).round();
            if k < 1.0 || (cp.angle - k * TAU).abs() > 1e-6 {
                return Err(UnfoldError::ConeAngle(cp.angle));
            }
            cp.multiplicity = k as u32;
        }
        let edges = total / 2;
        let chi = cone_points.len() as i64 - edges as i64 + cells.len() as i64;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(UnfoldError::BadGluing(format!("Euler characteristic {chi} is not that of a closed orientable surface")));
        }
        let area = cells.iter().map(|v| cell_area(v)).sum();
        Ok(TranslationSurface { cells, partner, cone_points, corner_class, genus: ((2 - chi) / 2) as u32, area, unfolding: None })
    }

    pub(crate) fn with_unfolding(mut self, data: UnfoldingData) -> Self {
        self.unfolding = Some(data);
        self
    }

    pub fn cells(&self) -> &[Vec<Vec2>] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &[Vec2] {
        &self.cells[c]
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Partner of edge `e` of cell `c`: `(cell, edge, translation)`.
    pub fn partner(&self, c: usize, e: usize) -> (usize, usize, Vec2) {
        self.partner[c][e]
    }

    /// Each glued pair once, with `(cell_a, edge_a) < (cell_b, edge_b)`.
    pub fn gluings(&self) -> Vec<Gluing> {
        let mut out = Vec::new();
        for (c, row) in self.partner.iter().enumerate() {
            for (e, &(pc, pe, t)) in row.iter().enumerate() {
                if (c, e) < (pc, pe) {
                    out.push(Gluing { cell_a: c, edge_a: e, cell_b: pc, edge_b: pe, translation: t });
                }
            }
        }
        out
    }

    pub fn cone_points(&self) -> &[ConePoint] {
        &self.cone_points
    }

    pub fn corner_class(&self, c: usize, v: usize) -> usize {
        self.corner_class[c][v]
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Euler characteristic `V - E + F` of the glued cell complex.
    pub fn euler_characteristic(&self) -> i64 {
        let total: usize = self.cells.iter().map(Vec::len).sum();
        self.cone_points.len() as i64 - (total / 2) as i64 + self.cells.len() as i64
    }

    pub fn unfolding(&self) -> Option<&UnfoldingData> {
        self.unfolding.as_ref()
    }

    /// Cells are polygons; `edge(c, e)` runs from vertex `e` to vertex `e + 1`.
    pub fn edge(&self, c: usize, e: usize) -> (Vec2, Vec2) {
        edge_of(&self.cells[c], e)
    }

    /// Image under a linear map (the `SL(2, ℝ)` action on the presentation).
    pub fn apply_linear(&self, a: Mat2) -> Result<TranslationSurface, UnfoldError> {
        let det = a.det();
        if det <= 0.0 {
            return Err(UnfoldError::BadGluing("linear map must preserve orientation".into()));
        }
        let cells = self.cells.iter().map(|v| v.iter().map(|&p| a.apply(p)).collect()).collect();
        let gluings: Vec<Gluing> = self.gluings().into_iter().map(|g| Gluing { translation: a.apply(g.translation), ..g }).collect();
        TranslationSurface::new(cells, &gluings)
    }

    /// Rescaled copy with total area one.
    pub fn normalized(&self) -> Result<TranslationSurface, UnfoldError> {
        let k = 1.0 / self.area.sqrt();
        self.apply_linear(Mat2::new(k, 0.0, 0.0, k))
    }

    /// Cell containing `p` in its interior (or on its boundary within `tol`).
    pub fn cell_contains(&self, c: usize, p: Vec2, tol: f64) -> bool {
        let v = &self.cells[c];
        let n = v.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            if crate::geometry::polygon::point_segment_distance(p, a, b) <= tol {
                return true;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

pub(crate) fn edge_of(v: &[Vec2], e: usize) -> (Vec2, Vec2) {
    (v[e], v[(e + 1) % v.len()])
}

/// Unit square with opposite sides glued: one cell, one marked point.
pub fn square_torus() -> TranslationSurface {
    parallelogram_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0))
}

/// Torus `ℝ² / (ℤu + ℤv)` presented by the parallelogram spanned by `u`, `v` (counterclockwise).
pub fn parallelogram_torus(u: Vec2, v: Vec2) -> TranslationSurface {
    let cells = vec![vec![Vec2::ZERO, u, u + v, v]];
    let gluings = [
        Gluing { cell_a: 0, edge_a: 0, cell_b: 0, edge_b: 2, translation: v },
        Gluing { cell_a: 0, edge_a: 1, cell_b: 0, edge_b: 3, translation: -u },
    ];
    TranslationSurface::new(cells, &gluings).expect("parallelogram torus is valid")
}

/// Two unit squares side by side forming a 2×1 torus with two marked points.
pub fn two_square_torus() -> TranslationSurface {
    let sq = |x: f64| vec![Vec2::new(x, 0.0), Vec2::new(x + 1.0, 0.0), Vec2::new(x + 1.0, 1.0), Vec2::new(x, 1.0)];
    let cells = vec![sq(0.0), sq(1.0)];
    let up = Vec2::new(0.0, 1.0);
    let gluings = [
        Gluing { cell_a: 0, edge_a: 0, cell_b: 0, edge_b: 2, translation: up },
        Gluing { cell_a: 1, edge_a: 0, cell_b: 1, edge_b: 2, translation: up },
        Gluing { cell_a: 0, edge_a: 1, cell_b: 1, edge_b: 3, translation: Vec2::ZERO },
        Gluing { cell_a: 1, edge_a: 1, cell_b: 0, edge_b: 3, translation: Vec2::new(-2.0, 0.0) },
    ];
    TranslationSurface::new(cells, &gluings).expect("two-square torus is valid")
}

/// Regular octagon with unit sides and opposite sides glued: genus 2, one cone point of angle 6π.
pub fn regular_octagon_surface() -> TranslationSurface {
    let mut v = Vec::with_capacity(8);
    let mut p = Vec2::ZERO;
    for i in 0..8 {
        v.push(p);
        p += Vec2::from_angle(i as f64 * TAU / 8.0);
    }
    let gluings: Vec<Gluing> =
        (0..4).map(|i| Gluing { cell_a: 0, edge_a: i, cell_b: 0, edge_b: i + 4, translation: v[(i + 5) % 8] - v[i] }).collect();
    TranslationSurface::new(vec![v], &gluings).expect("octagon surface is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_invariants() {
        let t = square_torus();
        assert_eq!(t.genus(), 1);
        assert_eq!(t.cone_points().len(), 1);
        assert_eq!(t.cone_points()[0].multiplicity, 1);
        assert_eq!(t.area(), 1.0);
    }

    #[test]
    fn octagon_single_cone_point() {
        let o = regular_octagon_surface();
        assert_eq!(o.genus(), 2);
        assert_eq!(o.cone_points().len(), 1);
        assert_eq!(o.cone_points()[0].multiplicity, 3);
        assert_eq!(o.cone_points()[0].order(), 2);
    }

    #[test]
    fn two_squares_two_marked_points() {
        let t = two_square_torus();
        assert_eq!(t.genus(), 1);
        assert_eq!(t.cone_points().len(), 2);
        assert!(t.cone_points().iter().all(|c| c.multiplicity == 1));
    }

    #[test]
    fn bad_gluings_rejected() {
        let cells = vec![vec![Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)]];
        // wrong translation
        let g = [
            Gluing { cell_a: 0, edge_a: 0, cell_b: 0, edge_b: 2, translation: Vec2::new(0.0, 2.0) },
            Gluing { cell_a: 0, edge_a: 1, cell_b: 0, edge_b: 3, translation: Vec2::new(-1.0, 0.0) },
        ];
        assert!(matches!(TranslationSurface::new(cells.clone(), &g), Err(UnfoldError::BadGluing(_))));
        // unglued edge
        assert!(matches!(TranslationSurface::new(cells, &g[1..]), Err(UnfoldError::BadGluing(_))));
    }

    #[test]
    fn shear_preserves_area_and_genus() {
        let o = regular_octagon_surface();
        let s = o.apply_linear(Mat2::shear(0.7)).unwrap();
        assert!((s.area() - o.area()).abs() < 1e-12);
        assert_eq!(s.genus(), 2);
    }
}
