use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("indeterminate at precision budget of {budget_bits} bits: {context}")]
    Indeterminate { context: String, budget_bits: u64 },

    #[error("source stream exhausted: {0}")]
    StreamExhausted(String),

    #[error("rational input where an irrational source is required")]
    RationalInput,

    #[error("cost guard: {what} needs {cost} steps, limit is {limit}")]
    CostGuard { what: String, cost: u128, limit: u128 },

    #[error("search methods disagree at window {window}: {detail}")]
    MethodDisagreement { window: String, detail: String },

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("invalid construction plan: {0}")]
    InvalidPlan(String),

    #[error("infeasible construction schedule: {0}")]
    InfeasibleSchedule(String),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("candidate lies outside the box")]
    CandidateOutsideBox,

    #[error("polynomial vanishes at the candidate")]
    ZeroAtCandidate,

    #[error("integer overflow in fixed-width kernel: {0}")]
    Overflow(String),

    #[error("window schedules do not match")]
    MismatchedSchedules,

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
