//! Error types shared by the library modules.

use thiserror::Error;

/// Failures of the small-matrix spinor constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum SpinorError {
    /// The construction needs a nonzero momentum (helicity spinors, `ι`).
    #[error("momentum must be nonzero (p = 0 is the singular direction)")]
    ZeroMomentum,
    /// A matrix that had to be inverted is singular.
    #[error("matrix is singular")]
    SingularMatrix,
}

/// Failures of the conformal flow and the Möbius action.
#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum FlowError {
    /// `|τ(λ, x)|` is below the singular-set tolerance.
    #[error("point lies on the singular set of the flow (lambda = {lambda}, tau = {tau:e})")]
    SingularPoint {
        /// Flow parameter.
        lambda: f64,
        /// Value of τ at the point.
        tau: f64,
    },
    /// The light-cone profile has a pole at this argument.
    #[error("light-cone profile has a pole (lambda = {lambda}, u = {u})")]
    ProfilePole {
        /// Flow parameter.
        lambda: f64,
        /// Light-cone coordinate.
        u: f64,
    },
    /// The matrix handed to the Möbius action is not in SU(2,2).
    #[error("matrix is not in SU(2,2) (defect {defect:e})")]
    NotSu22 {
        /// `max(‖gBg† − B‖, |det g − 1|)`.
        defect: f64,
    },
    /// The denominator `c·z + d` of the Möbius action is not invertible.
    #[error("Möbius denominator is singular")]
    SingularDenominator,
    /// The imaginary part of a tube point is not in the open forward cone.
    #[error("imaginary part is not in the open forward cone")]
    NotInTube,
}

/// Errors of the field-level operations and the command-line harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Spinor-algebra failure.
    #[error(transparent)]
    Spinor(#[from] SpinorError),
    /// Conformal-flow failure.
    #[error(transparent)]
    Flow(#[from] FlowError),
    /// Grid parameters violate their invariants.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    /// Two fields live on different grids.
    #[error("fields are sampled on different grids")]
    GridMismatch,
    /// The requested evolution or evaluation would leave the sampling box.
    #[error("support overflow: need {needed} but the half-width is {available}")]
    SupportOverflow {
        /// Radius the operation needs.
        needed: f64,
        /// Available half-width.
        available: f64,
    },
    /// The modular parameter is outside the admissible window.
    #[error("|lambda| = {lambda} exceeds the admissible maximum {max} for this support radius")]
    LambdaOutOfRange {
        /// Requested parameter.
        lambda: f64,
        /// Admissible maximum.
        max: f64,
    },
    /// An entropy route received a state that is not unit normalized.
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized {
        /// Observed norm.
        norm: f64,
    },
    /// The state is not localized in the unit ball.
    #[error("state is not supported in the unit ball (leak = {leak:e}, radius = {radius})")]
    SupportViolation {
        /// Mass outside the unit ball relative to the total.
        leak: f64,
        /// Declared support radius.
        radius: f64,
    },
    /// A test function uses a profile without a closed-form transform.
    #[error("test function profile has no closed-form transform: {0}")]
    NoClosedForm(String),
    /// Malformed input (state file, configuration, seeds).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// I/O failure.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    /// JSON (de)serialization failure.
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result type.
pub type Result<T, E = Error> = std::result::Result<T, E>;
