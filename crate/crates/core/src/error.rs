use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("residue r_{modulus} = {value} is not 0 or 1")]
    MalformedSequence { modulus: u64, value: u64 },

    #[error("index {0} is outside the order's domain")]
    OutOfDomain(String),
    #[error("interval sizes are not computable for order {0}")]
    NotComputable(String),

    #[error("element tag does not match model {model}: {element}")]
    TagMismatch { model: String, element: String },
    #[error("element is not in the divisible part: {0}")]
    NotDivisible(String),
    #[error("model is not plain: {0}")]
    NotPlain(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("zero element where a nonzero one is required")]
    ZeroElement,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("budget of {0} steps exceeded")]
    BudgetExceeded(usize),
    #[error("residues disagree at modulus {modulus}: {detail}")]
    ResidueMismatch { modulus: u64, detail: String },
    #[error("cuts disagree at coefficients {coeffs:?}")]
    CutMismatch { coeffs: Vec<i64> },
    #[error("division failed in the target: {0}")]
    DivisionFailed(String),
    #[error("probe is independent of the source basis: {0}")]
    ProbeIndependent(String),

    #[error("diagram stream gave no answer within {0} steps")]
    Diverges(usize),

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("element must be positive: {0}")]
    NonPositive(String),
    #[error("order is not finite: {0}")]
    NotFiniteOrder(String),

    #[error("tuples have different order patterns")]
    PatternMismatch,
    #[error("tuples have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("back-and-forth level {0} needs finite orders")]
    NotFinite(u32),

    #[error("configuration error: {0}")]
    Config(String),
}
