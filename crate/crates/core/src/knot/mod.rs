//! Knot curves in R^3, planar Gauss diagrams and the combinatorial oracle
//! for the Casson invariant.

mod bundled;
pub(crate) mod curve;
mod diagram;
mod oracle;

use thiserror::Error;

pub use bundled::{bundled_curve, bundled_json, bundled_names};
pub use curve::{make_torus_knot, resample_arclength, KnotCurve, Tolerances};
pub use diagram::{project_to_diagram, Crossing, GaussDiagram};
pub use oracle::{a2_oracle, casson_invariant, conway_polynomial, Polynomial, DEFAULT_DIRECTIONS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("curve is not regular: |gamma'({t})| = {speed:e}")]
    NotRegular { t: f64, speed: f64 },
    #[error("curve is not embedded: distance {distance:e} between parameters {s} and {t}")]
    NotEmbedded { s: f64, t: f64, distance: f64 },
    #[error("curves intersect: distance {distance:e}")]
    CurvesIntersect { distance: f64 },
    #[error("degenerate projection: {0}")]
    DegenerateProjection(String),
    #[error("inconsistent diagram: {0}")]
    InconsistentDiagram(String),
    #[error("cannot parse curve: {0}")]
    Parse(String),
}
