use thiserror::Error;

use crate::polar::CaseTag;

/// Why a parameter set does not define an elliptic fibration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NonEllipticReason {
    AZero,
    BZero,
    MZero,
    AM3Zero,
    BM3Zero,
    QZero,
    AM3BM3Zero,
}

impl NonEllipticReason {
    /// Reason code as printed in reports, e.g. `"Q=0"`.
    pub fn code(self) -> &'static str {
        match self {
            NonEllipticReason::AZero => "A=0",
            NonEllipticReason::BZero => "B=0",
            NonEllipticReason::MZero => "M=0",
            NonEllipticReason::AM3Zero => "a₋₃=0",
            NonEllipticReason::BM3Zero => "b₋₃=0",
            NonEllipticReason::QZero => "Q=0",
            NonEllipticReason::AM3BM3Zero => "a₋₃b₋₃=0",
        }
    }
}

impl std::fmt::Display for NonEllipticReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("tolerance {0} is outside (0, 1)")]
    ToleranceOutOfRange(f64),
    #[error("fiber type {0} is not a supported fiber at infinity")]
    UnsupportedInfinityType(String),
    #[error("residue condition violated for {case}: {condition} evaluates to {value}")]
    ResidueViolation {
        case: CaseTag,
        condition: &'static str,
        value: String,
    },
    #[error("not an elliptic fibration: {0}")]
    NotElliptic(NonEllipticReason),
    #[error("singular-locus system is degenerate: {0}")]
    DegenerateSystem(String),
    #[error("t-clustering is unstable at every level from tol={tol} down to the floor")]
    AmbiguousCluster { tol: f64 },
    #[error("invalid parabolic weights: {0}")]
    InvalidWeights(String),
    #[error("alpha_plus = {0} lies on a wall")]
    OnWall(String),
    #[error("fiber type {0} has no Hitchin-fiber table entry")]
    UnsupportedFiber(String),
    #[error("bidegree bookkeeping fails: {0}")]
    InconsistentBookkeeping(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
