//! The billiard flow on the unit tangent bundle of a polygon.

pub mod exact;
pub mod flow;
pub mod sample;
pub mod shadowing;

pub use exact::{flow_exact, step_exact, ExactState, ExactTrajectory};
pub use flow::{flow, step, trajectory_csv, CollisionEvent, StepResult, Termination, Trajectory};
pub use sample::liouville_sample;
pub use shadowing::{shadowing_experiment, ShadowingBounds, ShadowingReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::point::{normalize_angle, Vec2};

/// A ray that passes within this distance of a vertex terminates the orbit.
pub const VERTEX_TOL: f64 = 1e-12;
/// Collisions with `|sin(angle to edge)|` below this are treated as tangential.
pub const TANGENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BilliardError {
    #[error("orbit runs into vertex {vertex}")]
    HitVertex { vertex: usize, position: Vec2 },
    #[error("grazing collision with edge {edge}")]
    Tangency { edge: usize },
    #[error("ray escapes the polygon (state not inside)")]
    NoIntersection,
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("exact coordinates required")]
    NotExact,
}

/// A point of the phase space: position in the table and a unit direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitTangentState {
    pub position: Vec2,
    /// Angle in `[0, 2π)`.
    pub theta: f64,
    /// `(cos θ, sin θ)`, kept alongside `theta`.
    pub direction: Vec2,
    /// Edge the position lies on, if it is a boundary point.
    #[serde(default)]
    pub edge: Option<usize>,
}

impl UnitTangentState {
    pub fn new(position: Vec2, theta: f64) -> Self {
        let theta = normalize_angle(theta);
        UnitTangentState { position, theta, direction: Vec2::from_angle(theta), edge: None }
    }

    pub(crate) fn from_direction(position: Vec2, direction: Vec2, edge: Option<usize>) -> Self {
        let d = direction.normalized();
        UnitTangentState { position, theta: d.angle(), direction: d, edge }
    }

    /// Same point with the direction flipped.
    pub fn reversed(&self) -> Self {
        UnitTangentState::from_direction(self.position, -self.direction, self.edge)
    }

    /// Position reached after flowing a time `t` without collisions.
    pub fn advanced(&self, t: f64) -> Vec2 {
        self.position + self.direction * t
    }
}
