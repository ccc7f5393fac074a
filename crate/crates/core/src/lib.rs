//! Graph cohomology for decorated graphs and the configuration-space
//! integrals it controls for knots in flat space.
//!
//! * [`graph`]: decorated graphs, canonical forms, the coboundary `delta`.
//! * [`cocycle`]: exact rational matrices of `delta` and their kernels.
//! * [`knot`]: knot curves, planar diagrams and the Casson invariant oracle.
//! * [`integrator`]: Gauss-form integrals (self-linking, linking, graph
//!   integrals and the order-two invariant).

pub mod cocycle;
pub mod graph;
pub mod integrator;
pub mod knot;

pub use cocycle::{
    delta_matrix, kernel_basis, verify_cocycle, CocycleError, DeltaMatrix, RationalMatrix,
};
pub use graph::{
    canonicalize, contract_edge, delta, delta_sum, enumerate, CanonicalResult, DecoratedGraph,
    EdgeRef, Flavor, GraphError, GraphSum, Limits, Sign,
};
pub use integrator::{IntegralEstimate, IntegratorError, Method};
pub use knot::{CurveError, GaussDiagram, KnotCurve};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
