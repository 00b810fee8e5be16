//! Unfolding of rational polygons into translation surfaces.

pub mod io;
mod surface;

pub use io::{surface_from_json, surface_to_json, SurfaceRecord};
pub(crate) use surface::corner_angles;
pub use surface::{
    parallelogram_torus, regular_octagon_surface, square_torus, two_square_torus, ConePoint, Gluing, GroupElement, TranslationSurface,
    UnfoldingData, GLUE_TOL,
};

use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use thiserror::Error;

use crate::billiard::UnitTangentState;
use crate::geometry::point::Vec2;
use crate::geometry::{Polygon, ReflectionGroupInfo};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnfoldError {
    #[error("polygon is not rational")]
    Irrational,
    #[error("edge direction {edge} is incompatible with rotation order {order}")]
    IncompatibleEdge { edge: usize, order: u64 },
    #[error("cell {0} is degenerate or clockwise")]
    BadCell(usize),
    #[error("inconsistent gluing: {0}")]
    BadGluing(String),
    #[error("cone angle {0} is not a positive multiple of 2π")]
    ConeAngle(f64),
    #[error("surface was not produced by unfolding")]
    NotUnfolded,
    #[error("point is not inside the cell")]
    OutsideCell,
    #[error("surface file: {0}")]
    Format(String),
}

/// Zero orders of the cone points, marked points included as zeros.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    /// Sorted in decreasing order.
    pub orders: Vec<u32>,
    pub genus: u32,
}

impl Stratum {
    pub fn nonzero_orders(&self) -> Vec<u32> {
        self.orders.iter().copied().filter(|&a| a > 0).collect()
    }

    pub fn marked_points(&self) -> usize {
        self.orders.iter().filter(|&&a| a == 0).count()
    }

    /// `H(α)` notation, e.g. `(2)` or `(1, 1)`; `(0)` when there are no genuine zeros.
    pub fn label(&self) -> String {
        let nz = self.nonzero_orders();
        let parts: Vec<String> = if nz.is_empty() { vec!["0".into()] } else { nz.iter().map(u32::to_string).collect() };
        format!("({})", parts.join(", "))
    }
}

/// Stratum data read off the cone angles; checks Gauss–Bonnet against the Euler characteristic.
pub fn stratum_of(s: &TranslationSurface) -> Result<Stratum, UnfoldError> {
    let mut orders: Vec<u32> = s.cone_points().iter().map(ConePoint::order).collect();
    orders.sort_unstable_by(|a, b| b.cmp(a));
    let sum: i64 = orders.iter().map(|&a| a as i64).sum();
    if sum != 2 * s.genus() as i64 - 2 {
        return Err(UnfoldError::BadGluing(format!("zero orders sum to {sum} but genus is {}", s.genus())));
    }
    Ok(Stratum { orders, genus: s.genus() })
}

fn compose(g: GroupElement, h: GroupElement, m: u64) -> GroupElement {
    let k = if g.reflected { (g.k + m - h.k % m) % m } else { (g.k + h.k) % m };
    GroupElement { k, reflected: g.reflected != h.reflected }
}

/// Builds the surface tiled by the images of `p` under the group generated by its side reflections.
pub fn unfold(p: &Polygon, info: &ReflectionGroupInfo) -> Result<TranslationSurface, UnfoldError> {
    let m = match (info.is_rational, info.rotation_order) {
        (true, Some(m)) if m > 0 => m,
        _ => return Err(UnfoldError::Irrational),
    };
    let n = p.len();
    let beta = |e: usize| {
        let (a, b) = p.edge(e);
        (b - a).angle()
    };
    let base = beta(0);
    let mut side = Vec::with_capacity(n);
    for e in 0..n {
        let x = m as f64 * (beta(e) - base) / PI;
        let r = x.round();
        if (x - r).abs() > 1e-6 {
            return Err(UnfoldError::IncompatibleEdge { edge: e, order: m });
        }
        side.push(GroupElement { k: (r as i64).rem_euclid(m as i64) as u64, reflected: true });
    }

    // closure of the identity under right multiplication by side reflections
    let id = GroupElement { k: 0, reflected: false };
    let mut elements = vec![id];
    let mut index: HashMap<GroupElement, usize> = HashMap::from([(id, 0)]);
    let mut next = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let g = elements[i];
        let row: Vec<usize> = side
            .iter()
            .map(|&s| {
                let h = compose(g, s, m);
                *index.entry(h).or_insert_with(|| {
                    elements.push(h);
                    elements.len() - 1
                })
            })
            .collect();
        next.push(row);
        i += 1;
    }

    let mut data = UnfoldingData {
        polygon: p.clone(),
        rotation_order: m,
        base_angle: base,
        elements: elements.clone(),
        polygon_vertex: Vec::new(),
        polygon_edge: Vec::new(),
        identity_cell: 0,
    };
    let mut cells = Vec::with_capacity(elements.len());
    let mut cell_edge_of = Vec::with_capacity(elements.len());
    for &g in &elements {
        let a = data.linear(g);
        let (pv, pe): (Vec<usize>, Vec<usize>) = if g.reflected {
            ((0..n).map(|j| (n - j) % n).collect(), (0..n).map(|j| n - 1 - j).collect())
        } else {
            ((0..n).collect(), (0..n).collect())
        };
        cells.push(pv.iter().map(|&v| a.apply(p.vertex(v))).collect::<Vec<Vec2>>());
        let mut inv = vec![0; n];
        for (j, &e) in pe.iter().enumerate() {
            inv[e] = j;
        }
        cell_edge_of.push(inv);
        data.polygon_vertex.push(pv);
        data.polygon_edge.push(pe);
    }

    let mut gluings = Vec::new();
    for (c, &g) in elements.iter().enumerate() {
        for e in 0..n {
            let d = next[c][e];
            if (c, e) > (d, e) {
                continue;
            }
            let h = elements[d];
            let t = data.linear(h).apply(p.vertex(e)) - data.linear(g).apply(p.vertex(e));
            gluings.push(Gluing { cell_a: c, edge_a: cell_edge_of[c][e], cell_b: d, edge_b: cell_edge_of[d][e], translation: t });
        }
    }
    Ok(TranslationSurface::new(cells, &gluings)?.with_unfolding(data))
}

/// A point with direction on a translation surface, in the chart of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub cell: usize,
    pub position: Vec2,
    pub direction: Vec2,
}

/// Billiard state to the identity cell of an unfolded surface.
pub fn lift_state(p: &Polygon, s: &TranslationSurface, state: &UnitTangentState) -> Result<SurfacePoint, UnfoldError> {
    let data = s.unfolding().ok_or(UnfoldError::NotUnfolded)?;
    if data.polygon.vertices() != p.vertices() {
        return Err(UnfoldError::NotUnfolded);
    }
    Ok(SurfacePoint { cell: data.identity_cell, position: state.position, direction: state.direction })
}

/// Quotient by the group: surface point back to a billiard state in `P`.
pub fn project(s: &TranslationSurface, point: &SurfacePoint) -> Result<UnitTangentState, UnfoldError> {
    let data = s.unfolding().ok_or(UnfoldError::NotUnfolded)?;
    let inv = data.cell_linear(point.cell).inverse();
    Ok(UnitTangentState::from_direction(inv.apply(point.position), inv.apply(point.direction), None))
}

/// Directions `±θ + 2πk/M` reached by the billiard orbit of `θ` in a table of rotation order `M`.
pub fn direction_orbit(theta: f64, rotation_order: u64, base_angle: f64) -> Vec<f64> {
    use crate::geometry::point::normalize_angle;
    let m = rotation_order as f64;
    (0..rotation_order)
        .flat_map(|k| {
            let r = 2.0 * PI * k as f64 / m;
            [normalize_angle(theta + r), normalize_angle(2.0 * base_angle - theta + r)]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon::{triangle_from_angles, unit_square};
    use crate::geometry::{reflection_group_info, RationalityBounds};

    fn unfold_of(p: &Polygon) -> TranslationSurface {
        unfold(p, &reflection_group_info(p, RationalityBounds::default())).unwrap()
    }

    #[test]
    fn square_unfolds_to_torus() {
        let s = unfold_of(&unit_square());
        assert_eq!(s.cell_count(), 4);
        assert_eq!(s.genus(), 1);
        assert!((s.area() - 4.0).abs() < 1e-12);
        let st = stratum_of(&s).unwrap();
        assert!(st.nonzero_orders().is_empty());
    }

    #[test]
    fn pi8_triangle_is_genus_two() {
        let p = triangle_from_angles(PI / 8.0, 3.0 * PI / 8.0).unwrap();
        let s = unfold_of(&p);
        assert_eq!(s.cell_count(), 16);
        assert_eq!(s.genus(), 2);
        assert_eq!(stratum_of(&s).unwrap().nonzero_orders(), vec![2]);
    }

    #[test]
    fn irrational_rejected() {
        let p = triangle_from_angles(1.0, 1.0).unwrap();
        let info = reflection_group_info(&p, RationalityBounds::default());
        assert_eq!(unfold(&p, &info).unwrap_err(), UnfoldError::Irrational);
    }

    #[test]
    fn lift_project_round_trip() {
        let p = unit_square();
        let s = unfold_of(&p);
        let st = UnitTangentState::new(Vec2::new(0.3, 0.4), 1.1);
        let back = project(&s, &lift_state(&p, &s, &st).unwrap()).unwrap();
        assert!(back.position.dist(st.position) < 1e-15);
        assert!((back.theta - st.theta).abs() < 1e-15);
    }
}
