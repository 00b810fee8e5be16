//! Loading the table or surface named by `[input]`.

use std::f64::consts::PI;
use std::path::Path;

use billiard_lab::geometry::io::polygon_from_json;
use billiard_lab::geometry::polygon::{triangle_from_angles, unit_square};
use billiard_lab::geometry::{reflection_group_info, ArithmeticMode, Polygon, RationalityBounds, ReflectionGroupInfo};
use billiard_lab::unfolding::{regular_octagon_surface, square_torus, surface_from_json, two_square_torus, unfold, TranslationSurface};

use crate::config::InputConfig;
use crate::error::CliError;

fn read(base: &Path, file: &str) -> Result<String, CliError> {
    let path = base.join(file);
    std::fs::read_to_string(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

impl InputConfig {
    fn sources(&self) -> usize {
        [
            self.polygon.is_some(),
            self.triangle.is_some(),
            self.builtin_polygon.is_some(),
            self.surface.is_some(),
            self.builtin_surface.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count()
    }

    pub fn check(&self) -> Result<(), CliError> {
        match self.sources() {
            1 => Ok(()),
            0 => Err(CliError::Config("[input] needs one of polygon, triangle, builtin_polygon, surface, builtin_surface".into())),
            _ => Err(CliError::Config("[input] names more than one source".into())),
        }
    }

    pub fn bounds(&self) -> RationalityBounds {
        let d = RationalityBounds::default();
        RationalityBounds {
            tolerance: self.rational_tolerance.unwrap_or(d.tolerance),
            max_denominator: self.max_denominator.unwrap_or(d.max_denominator),
        }
    }

    /// The billiard table; `mode` rational demands exact vertices.
    pub fn polygon(&self, base: &Path, mode: ArithmeticMode) -> Result<Polygon, CliError> {
        self.check()?;
        let p = if let Some(file) = &self.polygon {
            polygon_from_json(&read(base, file)?)?
        } else if let Some([a, b]) = self.triangle {
            triangle_from_angles(a * PI, b * PI)?
        } else if let Some(name) = &self.builtin_polygon {
            match name.as_str() {
                "square" => unit_square(),
                other => return Err(CliError::Config(format!("unknown builtin polygon {other:?}"))),
            }
        } else {
            return Err(CliError::Config("this command needs a polygon input".into()));
        };
        if mode == ArithmeticMode::Rational && p.exact_vertices().is_none() {
            return Err(CliError::Input("rational mode needs a polygon with exact coordinates".into()));
        }
        Ok(p)
    }

    pub fn group_info(&self, p: &Polygon) -> ReflectionGroupInfo {
        reflection_group_info(p, self.bounds())
    }

    /// A surface given directly, or the unfolding of the polygon input.
    pub fn surface(&self, base: &Path, mode: ArithmeticMode) -> Result<TranslationSurface, CliError> {
        self.check()?;
        if let Some(file) = &self.surface {
            return load_surface(&read(base, file)?);
        }
        if let Some(name) = &self.builtin_surface {
            return match name.as_str() {
                "torus" => Ok(square_torus()),
                "two-square" => Ok(two_square_torus()),
                "octagon" => Ok(regular_octagon_surface()),
                other => Err(CliError::Config(format!("unknown builtin surface {other:?}"))),
            };
        }
        let p = self.polygon(base, mode)?;
        Ok(unfold(&p, &self.group_info(&p))?)
    }
}

/// A bare surface record, or the `surface.json` written by `unfold`.
fn load_surface(text: &str) -> Result<TranslationSurface, CliError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("surface file: {e}")))?;
    match v.get("surface") {
        Some(inner) => Ok(surface_from_json(&inner.to_string())?),
        None => Ok(surface_from_json(text)?),
    }
}
