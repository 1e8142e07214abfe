//! Application-level errors with their process exit codes.

use sturmian_core::CoreError;

/// Exit code for usage errors (bad flags, unparseable inputs, violated
/// preconditions the caller controls).
pub const EXIT_USAGE: i32 = 1;
/// Exit code for numeric failures (non-convergence, degenerate data).
pub const EXIT_NUMERIC: i32 = 2;
/// Exit code for verification failures.
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug)]
pub enum AppError {
    /// The invocation itself is wrong; fix the command line.
    Usage(String),
    /// The computation failed; inputs were plausible but the numerics gave up.
    Numeric(String),
    /// Filesystem trouble writing an artifact.
    Io(std::io::Error),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => EXIT_USAGE,
            AppError::Numeric(_) | AppError::Io(_) => EXIT_NUMERIC,
        }
    }

    pub fn message(&self) -> String {
        match self {
            AppError::Usage(m) => format!("usage error: {m}"),
            AppError::Numeric(m) => format!("numeric failure: {m}"),
            AppError::Io(e) => format!("io error: {e}"),
        }
    }
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match e {
            // parameter problems the caller can fix directly
            CoreError::InvalidInput(_) | CoreError::LambdaGuard { .. } => {
                AppError::Usage(e.to_string())
            }
            // everything else is a numeric breakdown
            _ => AppError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}
