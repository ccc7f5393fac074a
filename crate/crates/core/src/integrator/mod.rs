//! Configuration-space integrals of the Gauss form in flat space.

mod forms;
mod montecarlo;
mod quadrature;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::knot::CurveError;

pub use forms::{gauss_two_form, wedge_top, ConfigPoint, Configuration, TwoForm, MAX_DIM};
pub use montecarlo::{
    a_gamma_mc, a_gamma_mc_with, order_two_cocycle, v2_breakdown, v2_invariant, McSettings,
    TermEstimate, V2Estimate, ORIENTATION,
};
pub use quadrature::{linking_integral, sln_integral};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegratorError {
    #[error("vertices {i} and {j} coincide (distance {distance:e})")]
    CoincidentPoints { i: usize, j: usize, distance: f64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("unsupported graph: {0}")]
    UnsupportedGraph(String),
    #[error("{forms} two-forms cannot fill dimension {dim}")]
    DimensionMismatch { forms: usize, dim: usize },
    #[error("the graph sum is not a cocycle")]
    NotACocycle,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

/// A numerical value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub method: Method,
}

impl IntegralEstimate {
    /// `self - other` with errors combined in quadrature.
    pub fn difference(&self, other: &IntegralEstimate) -> (f64, f64) {
        (
            self.value - other.value,
            self.std_error.hypot(other.std_error),
        )
    }
}
