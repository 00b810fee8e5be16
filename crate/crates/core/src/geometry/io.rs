//! Polygon file format: `{"vertices": [[x, y], ...], "arithmetic": "rational" | "float"}`.
//! Rational coordinates are written as `"p/q"` strings; numbers are accepted on input.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::point::{format_rational, parse_rational, RatPoint, Vec2};
use super::polygon::{validate_polygon, validate_rational_polygon, ArithmeticMode, Polygon};
use super::GeometryError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonRecord {
    pub vertices: Vec<[Value; 2]>,
    #[serde(default)]
    pub arithmetic: ArithmeticMode,
}

fn value_to_rational(v: &Value) -> Option<num_rational::BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()).or_else(|| n.as_f64().and_then(num_rational::BigRational::from_float)),
        _ => None,
    }
}

fn value_to_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => parse_rational(s).map(|r| super::point::rat_to_f64(&r)),
        _ => None,
    }
}

impl PolygonRecord {
    pub fn from_polygon(p: &Polygon) -> Self {
        match p.exact_vertices() {
            Some(e) => PolygonRecord {
                vertices: e.iter().map(|q| [Value::String(format_rational(&q.x)), Value::String(format_rational(&q.y))]).collect(),
                arithmetic: ArithmeticMode::Rational,
            },
            None => PolygonRecord {
                vertices: p.vertices().iter().map(|v| [Value::from(v.x), Value::from(v.y)]).collect(),
                arithmetic: ArithmeticMode::Float,
            },
        }
    }

    pub fn to_polygon(&self) -> Result<Polygon, GeometryError> {
        match self.arithmetic {
            ArithmeticMode::Rational => {
                let pts = self
                    .vertices
                    .iter()
                    .map(|[x, y]| {
                        let x = value_to_rational(x).ok_or_else(|| GeometryError::Parse(format!("bad coordinate {x}")))?;
                        let y = value_to_rational(y).ok_or_else(|| GeometryError::Parse(format!("bad coordinate {y}")))?;
                        Ok(RatPoint::new(x, y))
                    })
                    .collect::<Result<Vec<_>, GeometryError>>()?;
                validate_rational_polygon(pts)
            }
            ArithmeticMode::Float => {
                let pts = self
                    .vertices
                    .iter()
                    .map(|[x, y]| {
                        let x = value_to_f64(x).ok_or_else(|| GeometryError::Parse(format!("bad coordinate {x}")))?;
                        let y = value_to_f64(y).ok_or_else(|| GeometryError::Parse(format!("bad coordinate {y}")))?;
                        Ok(Vec2::new(x, y))
                    })
                    .collect::<Result<Vec<_>, GeometryError>>()?;
                validate_polygon(&pts)
            }
        }
    }
}

pub fn polygon_from_json(text: &str) -> Result<Polygon, GeometryError> {
    let rec: PolygonRecord = serde_json::from_str(text).map_err(|e| GeometryError::Parse(e.to_string()))?;
    rec.to_polygon()
}

pub fn polygon_to_json(p: &Polygon) -> String {
    serde_json::to_string_pretty(&PolygonRecord::from_polygon(p)).expect("polygon record serializes")
}
