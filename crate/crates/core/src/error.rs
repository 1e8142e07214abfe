//! Error type shared by the numeric routines.

use core::fmt;

/// Failure modes of the numeric routines. Variants carry enough context to
/// report the offending input without a debugger.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Digit extraction ran out of precision, or the input collapsed to a
    /// rational before the requested digit count.
    RationalOrPrecisionExhausted { digits_extracted: usize },
    /// An input violated a documented precondition.
    InvalidInput(&'static str),
    /// A 1-d root solve failed to bracket or converge.
    RootFindFailed { what: &'static str, at: f64 },
    /// Normal-line projection between level sets failed at a surface point.
    ProjectionFailed { point: [f64; 3] },
    /// Arccos branch selection could not pick a preimage candidate.
    AmbiguousBranch { point: [f64; 2], best: f64, runner_up: f64 },
    /// No preimage candidate landed within the branch window.
    NoBranchCandidate { point: [f64; 2], best: f64 },
    /// Perturbation size exceeds the guard for well-posed projections.
    LambdaGuard { lambda: f64, guard: f64 },
    /// A projective or graph-transform iteration failed to contract.
    NoContraction { steps: usize, last_delta: f64 },
    /// The iterated curve left its chart box.
    CurveLeftBox { step: usize },
    /// Too few usable scales survived saturation filtering for a dimension fit.
    TooFewUsableScales { usable: usize },
    /// An interval-set operation needs a nonempty set.
    EmptySet,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::RationalOrPrecisionExhausted { digits_extracted } => write!(
                f,
                "input is rational or out of precision after {digits_extracted} digits"
            ),
            CoreError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            CoreError::RootFindFailed { what, at } => {
                write!(f, "root find failed ({what}) near {at}")
            }
            CoreError::ProjectionFailed { point } => write!(
                f,
                "normal projection failed at ({}, {}, {})",
                point[0], point[1], point[2]
            ),
            CoreError::AmbiguousBranch { point, best, runner_up } => write!(
                f,
                "ambiguous arccos branch at ({}, {}): best {best}, runner-up {runner_up}",
                point[0], point[1]
            ),
            CoreError::NoBranchCandidate { point, best } => write!(
                f,
                "no arccos branch candidate within window at ({}, {}): best {best}",
                point[0], point[1]
            ),
            CoreError::LambdaGuard { lambda, guard } => {
                write!(f, "lambda {lambda} exceeds guard {guard} (pass the override to proceed)")
            }
            CoreError::NoContraction { steps, last_delta } => {
                write!(f, "iteration failed to contract after {steps} steps (delta {last_delta})")
            }
            CoreError::CurveLeftBox { step } => {
                write!(f, "iterated curve left its chart box at step {step}")
            }
            CoreError::TooFewUsableScales { usable } => {
                write!(f, "only {usable} usable scales after saturation filtering (need 2)")
            }
            CoreError::EmptySet => write!(f, "operation requires a nonempty interval set"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}
