use crate::exact::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while loading inputs or running a sampler.
///
/// Variants fall into three families, mirrored by [`Error::kind`]: malformed
/// input, a refused parameter regime, and a broken internal invariant.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("edge {0}-{1} does not cross the declared bipartition")]
    BipartitionViolated(usize, usize),

    #[error("graph has no declared bipartition")]
    NoBipartition,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(Box<Rational>),

    #[error("computable probability failed to refine below width 2^-{0}")]
    RefinementFailed(u32),

    #[error(
        "lambda = {lambda} is not below the critical threshold lambda*({delta},{q}) = {threshold}"
    )]
    AboveThreshold {
        lambda: Box<Rational>,
        delta: usize,
        q: u32,
        threshold: Box<Rational>,
    },

    #[error("weight factor f(gamma) exceeds 1 on a graphlet of size {size}")]
    WeightExceedsBound { size: usize },

    #[error("condition {condition} fails: {detail}")]
    ConditionFailed {
        condition: &'static str,
        detail: String,
    },

    #[error("step budget of {0} bounding-chain steps exhausted before coalescence")]
    StepBudgetExceeded(u64),

    #[error("enumeration exceeded the cap of {0} items")]
    EnumerationCap(usize),

    #[error("partition function is zero; the distribution is undefined")]
    DegenerateDistribution,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Refused,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::AboveThreshold { .. }
            | Error::WeightExceedsBound { .. }
            | Error::ConditionFailed { .. } => ErrorKind::Refused,
            Error::Invariant(_) | Error::RefinementFailed(_) | Error::StepBudgetExceeded(_) => {
                ErrorKind::Internal
            }
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
