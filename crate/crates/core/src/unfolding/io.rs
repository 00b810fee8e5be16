//! JSON surface files: `{"cells": [[[x, y], ...], ...], "gluings": [[cell, edge, cell, edge, tx, ty], ...]}`.

use serde::{Deserialize, Serialize};

use super::{Gluing, TranslationSurface, UnfoldError};
use crate::geometry::point::Vec2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceRecord {
    pub cells: Vec<Vec<[f64; 2]>>,
    pub gluings: Vec<(usize, usize, usize, usize, f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stratum: Option<Vec<u32>>,
}

impl SurfaceRecord {
    pub fn from_surface(s: &TranslationSurface) -> Self {
        let stratum = super::stratum_of(s).ok().map(|st| st.orders);
        SurfaceRecord {
            cells: s.cells().iter().map(|c| c.iter().map(|p| [p.x, p.y]).collect()).collect(),
            gluings: s.gluings().iter().map(|g| (g.cell_a, g.edge_a, g.cell_b, g.edge_b, g.translation.x, g.translation.y)).collect(),
            genus: Some(s.genus()),
            stratum,
        }
    }

    pub fn to_surface(&self) -> Result<TranslationSurface, UnfoldError> {
        let cells = self.cells.iter().map(|c| c.iter().map(|&[x, y]| Vec2::new(x, y)).collect()).collect();
        let gluings: Vec<Gluing> = self
            .gluings
            .iter()
            .map(|&(cell_a, edge_a, cell_b, edge_b, tx, ty)| Gluing { cell_a, edge_a, cell_b, edge_b, translation: Vec2::new(tx, ty) })
            .collect();
        TranslationSurface::new(cells, &gluings)
    }
}

pub fn surface_to_json(s: &TranslationSurface) -> String {
    serde_json::to_string_pretty(&SurfaceRecord::from_surface(s)).expect("surface record serializes")
}

pub fn surface_from_json(text: &str) -> Result<TranslationSurface, UnfoldError> {
    let rec: SurfaceRecord = serde_json::from_str(text).map_err(|e| UnfoldError::Format(e.to_string()))?;
    rec.to_surface()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unfolding::regular_octagon_surface;

    #[test]
    fn round_trip() {
        let o = regular_octagon_surface();
        let back = surface_from_json(&surface_to_json(&o)).unwrap();
        assert_eq!(back.genus(), 2);
        assert_eq!(back.gluings(), o.gluings());
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(surface_from_json(r#"{"cells": [], "gluings": [], "extra": 1}"#).is_err());
    }
}
