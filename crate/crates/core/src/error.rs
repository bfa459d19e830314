use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {re} + {im}i is outside the domain: {reason}")]
    OutsideDomain { re: f64, im: f64, reason: &'static str },

    #[error("point hits the puncture at the origin")]
    PunctureHit,

    #[error("argument out of range: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("degenerate polyline: {0}")]
    DegeneratePolyline(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("parabolic tangency: the real fixed points coincide")]
    ParabolicTangency,

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("non-contraction at pullback {step}: bound ratio {ratio}")]
    NonContraction { step: usize, ratio: f64 },

    #[error("branch mismatch: {0}")]
    BranchMismatch(String),

    #[error("segment meets the boundary sample hull: {0}")]
    HullIntersection(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(&'static str),
}

/// Broad error classes used to pick a process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Domain,
    Numeric,
    Hypothesis,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonConvergence(_)
            | Error::NonContraction { .. }
            | Error::Overflow(_)
            | Error::BranchMismatch(_)
            | Error::HullIntersection(_) => ErrorClass::Numeric,
            Error::Hypothesis(_) => ErrorClass::Hypothesis,
            _ => ErrorClass::Domain,
        }
    }

    /// Short machine-readable reason code.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::OutsideDomain { .. } => "outside-domain",
            Error::PunctureHit => "puncture-hit",
            Error::Domain(_) => "domain-error",
            Error::Invalid(_) => "invalid-input",
            Error::DegeneratePolyline(_) => "degenerate-polyline",
            Error::Overflow(_) => "overflow",
            Error::ParabolicTangency => "parabolic-tangency",
            Error::NonConvergence(_) => "non-convergence",
            Error::NonContraction { .. } => "non-contraction",
            Error::BranchMismatch(_) => "branch-mismatch",
            Error::HullIntersection(_) => "hull-intersection",
            Error::Hypothesis(code) => code,
        }
    }
}
