use std::fmt;

use group_core::GroupError;
use mixing_lab::MixError;
use schreier_graphs::GraphError;
use serde_json::json;
use tree_calculus::TreeError;

/// Failure classes, one per process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Validation,
    Numerical,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Usage => 1,
            Kind::Validation => 2,
            Kind::Numerical => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::Usage => "usage",
            Kind::Validation => "validation",
            Kind::Numerical => "numerical",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CliError {
    pub kind: Kind,
    /// Name of the underlying error variant.
    pub error: String,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Kind, error: &str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            error: error.to_string(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Kind::Usage, "Usage", message)
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(Kind::Validation, "InvalidConfig", message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(Kind::Validation, "Io", message)
    }

    /// Single-line JSON for standard error.
    pub fn to_json_line(&self) -> String {
        json!({
            "error": self.error,
            "kind": self.kind.name(),
            "exit_code": self.kind.exit_code(),
            "message": self.message,
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.error, self.message)
    }
}

fn variant<E: fmt::Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or_default()
        .to_string()
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::new(Kind::Validation, &variant(&e), e.to_string())
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        let kind = match e {
            TreeError::NoConvergence { .. }
            | TreeError::CriterionNeverReachesOne { .. }
            | TreeError::RoundTripResidualTooLarge { .. }
            | TreeError::SingularSystem => Kind::Numerical,
            _ => Kind::Validation,
        };
        CliError::new(kind, &variant(&e), e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Group(g) => g.into(),
            e => CliError::new(Kind::Validation, &variant(&e), e.to_string()),
        }
    }
}

impl From<MixError> for CliError {
    fn from(e: MixError) -> Self {
        match e {
            MixError::Graph(g) => g.into(),
            MixError::Tree(t) => t.into(),
            e => {
                let kind = match e {
                    MixError::NotMixedByHorizon { .. } | MixError::StopSpecUnbounded => Kind::Numerical,
                    _ => Kind::Validation,
                };
                CliError::new(kind, &variant(&e), e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
