//! Command line errors with stable exit codes, one code per failure class.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed problem file: syntax, types, or unknown fields.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    /// Well-formed file whose content cannot be used as requested.
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
    /// Bad flag combination not expressible as a clap rule.
    #[error("{0}")]
    Usage(String),
    /// Malformed curve file.
    #[error("{path}:{line}: {message}")]
    Curve {
        path: String,
        line: usize,
        message: String,
    },
    /// Curve file with a header but no points.
    #[error("curve file {0} contains no points")]
    EmptyCurve(String),
    #[error(transparent)]
    Lib(#[from] fractal_spline::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use fractal_spline::Error as E;
        match self {
            Self::Parse { .. } | Self::Usage(_) | Self::Curve { .. } => 2,
            Self::Semantic { .. } => 3,
            Self::EmptyCurve(_) => 10,
            Self::Io(_) => 11,
            Self::Lib(e) => match e {
                E::ScalingOutOfRange { .. }
                | E::AlphaSupOutOfRange { .. }
                | E::NonPositiveAlpha { .. } => 4,
                E::BoundViolatedAtKnot { .. }
                | E::WrongBoundKind { .. }
                | E::NonPositiveBC { .. } => 5,
                E::Infeasible { .. } => 6,
                E::UnknownGenerator(_) => 7,
                E::PointOutsideDomain { .. }
                | E::PointOutsideSubinterval { .. }
                | E::CoincidentArguments { .. } => 8,
                E::DepthTooLarge { .. } => 9,
                _ => 3,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
