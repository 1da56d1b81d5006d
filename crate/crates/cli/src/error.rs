use std::fmt;

/// Front-end errors, each mapped to a process exit code:
/// 2 input error, 3 math inconsistency, 4 precision cap reached.
#[derive(Debug, Clone)]
pub enum CliError {
    Io { path: String, msg: String },
    Syntax { location: String, msg: String },
    MissingCurve,
    MissingBranch { command: &'static str },
    IncidenceFailed { branch: usize },
    NotNormalized { reason: String },
    Math { msg: String },
    Mismatch { failures: Vec<String> },
    PrecisionCap { cap: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. }
            | CliError::Syntax { .. }
            | CliError::MissingCurve
            | CliError::MissingBranch { .. }
            | CliError::IncidenceFailed { .. }
            | CliError::NotNormalized { .. } => 2,
            CliError::Math { .. } | CliError::Mismatch { .. } => 3,
            CliError::PrecisionCap { .. } => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, msg } => write!(f, "cannot read '{}': {}", path, msg),
            CliError::Syntax { location, msg } => write!(f, "syntax error at {}: {}", location, msg),
            CliError::MissingCurve => write!(f, "the curve file defines no [curve] equation"),
            CliError::MissingBranch { command } => {
                write!(f, "command '{}' needs a [branch] parametrization", command)
            }
            CliError::IncidenceFailed { branch } => {
                write!(f, "branch {} does not lie on the curve (incidence check failed)", branch)
            }
            CliError::NotNormalized { reason } => {
                write!(f, "parametrization rejected: {}", reason)
            }
            CliError::Math { msg } => write!(f, "math inconsistency: {}", msg),
            CliError::Mismatch { failures } => {
                write!(f, "verification failed:")?;
                for line in failures {
                    write!(f, "\n  {}", line)?;
                }
                Ok(())
            }
            CliError::PrecisionCap { cap } => {
                write!(f, "precision escalation reached the cap ({})", cap)
            }
        }
    }
}

impl std::error::Error for CliError {}
