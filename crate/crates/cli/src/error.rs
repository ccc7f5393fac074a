use graphflow::{CocycleError, CurveError, GraphError, IntegratorError};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    ResourceLimit(String),
    #[error("{message}")]
    Validation {
        invariant: &'static str,
        message: String,
    },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::ResourceLimit(_) => 3,
            CliError::Validation { .. } => 4,
            CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let kind = match self {
            CliError::Parse(_) => "parse",
            CliError::ResourceLimit(_) => "resource_limit",
            CliError::Validation { .. } => "validation",
            CliError::Io(_) => "io",
            CliError::Failed(_) => "failed",
        };
        let mut error = json!({ "kind": kind, "message": self.to_string() });
        if let CliError::Validation { invariant, .. } = self {
            error["invariant"] = json!(invariant);
        }
        json!({ "error": error, "version": graphflow::VERSION })
    }

    fn invalid(invariant: &'static str, e: impl ToString) -> Self {
        CliError::Validation {
            invariant,
            message: e.to_string(),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::ResourceLimit { .. } | GraphError::OrderLimit(..) => {
                CliError::ResourceLimit(e.to_string())
            }
            GraphError::Parse { .. } => CliError::Parse(e.to_string()),
            GraphError::SelfLoop(..) => CliError::invalid("no_self_loops", e),
            GraphError::LabelOutOfRange(..) => CliError::invalid("labels_in_range", e),
            GraphError::TooFewExternal(_) => CliError::invalid("two_external_vertices", e),
            GraphError::ManifoldWithExternal(_) => CliError::invalid("no_external_vertices", e),
            GraphError::NotRegular | GraphError::NotContractible | GraphError::NoSuchEdge(_) => {
                CliError::Failed(e.to_string())
            }
        }
    }
}

impl From<CocycleError> for CliError {
    fn from(e: CocycleError) -> Self {
        match e {
            CocycleError::Graph(g) => g.into(),
            CocycleError::GradeMismatch(..) => CliError::invalid("homogeneous_grade", e),
            CocycleError::NotInBasis(_) | CocycleError::Dimension(_) => {
                CliError::Failed(e.to_string())
            }
        }
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::InvalidParams(_) | CurveError::Parse(_) => CliError::Parse(e.to_string()),
            CurveError::NotRegular { .. } => CliError::invalid("regular", e),
            CurveError::NotEmbedded { .. } => CliError::invalid("embedded", e),
            CurveError::CurvesIntersect { .. } => CliError::invalid("disjoint", e),
            CurveError::DegenerateProjection(_) => CliError::invalid("generic_projection", e),
            CurveError::InconsistentDiagram(_) => CliError::invalid("consistent_diagram", e),
        }
    }
}

impl From<IntegratorError> for CliError {
    fn from(e: IntegratorError) -> Self {
        match e {
            IntegratorError::Curve(c) => c.into(),
            IntegratorError::CoincidentPoints { .. } => CliError::invalid("no_collisions", e),
            IntegratorError::UnsupportedGraph(_) => CliError::invalid("supported_graph", e),
            IntegratorError::NotACocycle => CliError::invalid("cocycle", e),
            IntegratorError::InvalidParams(_) => CliError::Parse(e.to_string()),
            IntegratorError::DimensionMismatch { .. } => CliError::Failed(e.to_string()),
        }
    }
}
