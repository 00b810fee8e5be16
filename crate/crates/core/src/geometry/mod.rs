//! Polygons, triangulations, δ-perturbations and reflection-group rationality.

pub mod io;
pub mod perturb;
pub mod point;
pub mod polygon;
pub mod rationality;
pub mod triangulate;

pub use perturb::{perturb, PerturbationMap};
pub use point::{RatPoint, Vec2};
pub use polygon::{validate_polygon, validate_rational_polygon, ArithmeticMode, Polygon};
pub use rationality::{reflection_group_info, RationalityBounds, ReflectionGroupInfo};
pub use triangulate::{triangulate, Triangulation};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {first} and {second} coincide")]
    RepeatedVertex { first: usize, second: usize },
    #[error("degenerate (collinear) corner at vertex {vertex}")]
    Degenerate { vertex: usize },
    #[error("edges {edge_a} and {edge_b} intersect")]
    SelfIntersecting { edge_a: usize, edge_b: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("delta {delta} must be below d(P)/2 = {limit}")]
    DeltaTooLarge { delta: f64, limit: f64 },
    #[error("invalid delta {0}")]
    InvalidDelta(f64),
    #[error("no valid perturbation after {attempts} attempts")]
    PerturbationFailed { attempts: usize },
    #[error("perturbed triangle lost its orientation")]
    TriangulationBroken,
    #[error("polygons have {0} and {1} vertices")]
    VertexCountMismatch(usize, usize),
    #[error("point ({x}, {y}) lies outside the polygon")]
    OutsidePolygon { x: f64, y: f64 },
    #[error("exact coordinates required")]
    NotExact,
    #[error("parse error: {0}")]
    Parse(String),
}
