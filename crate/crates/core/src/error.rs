//! Error type shared across the crate.

use std::fmt;

/// Everything that can go wrong while validating parameters or evaluating.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Spec shape constraints violated (m ≤ q, n ≤ p, row lengths).
    ShapeInvalid(String),
    /// A lower pole coincides with an upper pole.
    PoleCollision { lower: f64, upper: f64 },
    /// Gamma function evaluated at a nonpositive integer.
    GammaPole(f64),
    /// No vertical line separates the two pole sets.
    NoAdmissibleLine,
    /// The admissible strip is too narrow for a stable contour.
    PoleTooCloseToLine { halfwidth: f64 },
    /// Contour tail did not drop below the absolute tolerance.
    TailNotConverged { estimate: f64 },
    /// Residue series truncation error above tolerance.
    SeriesNotConverged { estimate: f64 },
    /// Pole of order > 3 in a residue expansion.
    PoleOrderTooHigh { order: usize },
    /// Coinciding upper poles: expansion at infinity unsupported.
    CoincidentUpperPoles { location: f64 },
    /// Two lower poles are close enough to destabilise residue formulas.
    NearResonance { gap: f64 },
    /// Two admissible evaluation routes disagree beyond tolerance.
    RouteDisagreement { a: f64, b: f64, tol: f64 },
    /// No transform rule applies (e.g. no cancellable parameter pair).
    NotReducible,
    /// Named precondition of an operation failed.
    PreconditionViolated(String),
    /// Iterative scheme exhausted its budget.
    NonConvergence(String),
    /// Kernel or density diverges at the requested point.
    SingularAtOrigin(String),
    /// Parameter outside its documented range.
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeInvalid(msg) => write!(f, "invalid H-function shape: {msg}"),
            Error::PoleCollision { lower, upper } => {
                write!(f, "pole collision: lower pole {lower} meets upper pole {upper}")
            }
            Error::GammaPole(z) => write!(f, "gamma pole at z = {z}"),
            Error::NoAdmissibleLine => write!(f, "no admissible vertical contour line"),
            Error::PoleTooCloseToLine { halfwidth } => {
                write!(f, "pole too close to contour line (strip halfwidth {halfwidth:.3e})")
            }
            Error::TailNotConverged { estimate } => {
                write!(f, "contour tail not converged (estimate {estimate:.3e})")
            }
            Error::SeriesNotConverged { estimate } => {
                write!(f, "series not converged (estimate {estimate:.3e})")
            }
            Error::PoleOrderTooHigh { order } => {
                write!(f, "pole of order {order} unsupported (max 3)")
            }
            Error::CoincidentUpperPoles { location } => {
                write!(f, "coincident upper poles at s = {location}")
            }
            Error::NearResonance { gap } => {
                write!(f, "near-resonant pole pair (gap {gap:.3e}); contour route forced")
            }
            Error::RouteDisagreement { a, b, tol } => {
                write!(f, "evaluation routes disagree: {a:.12e} vs {b:.12e} (tol {tol:.3e})")
            }
            Error::NotReducible => write!(f, "no cancellable parameter pair"),
            Error::PreconditionViolated(msg) => write!(f, "precondition violated: {msg}"),
            Error::NonConvergence(msg) => write!(f, "did not converge: {msg}"),
            Error::SingularAtOrigin(msg) => write!(f, "singular at the origin: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit-code class used by the CLI: 2 for validation, 3 for numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::ShapeInvalid(_)
                | Error::PoleCollision { .. }
                | Error::GammaPole(_)
                | Error::PreconditionViolated(_)
                | Error::InvalidParameter(_)
                | Error::NotReducible
                | Error::SingularAtOrigin(_)
        )
    }
}
