use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable lists differ: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },

    #[error("coefficient domains differ")]
    DomainMismatch,

    #[error("element has no square root in this domain")]
    NotASquare,

    #[error("modulus 0x{0:x} is not irreducible over GF(2)")]
    ReducibleModulus(u64),

    #[error("unsupported field degree {0} (must be 1..=32)")]
    FieldDegree(u32),

    #[error("matrix size {0} is odd; the Pfaffian needs an even size")]
    OddSize(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("entries must be field scalars, evaluate polynomial entries first")]
    NotScalar,

    #[error("linear part of the system is singular in the unknowns")]
    SingularLinearPart,

    #[error("Groebner computation exceeded its resource cap ({0})")]
    ResourceCap(String),

    #[error("hessian rank {rank} but rank {expected} is required")]
    HessianRank { rank: usize, expected: usize },

    #[error("jet order {order} is too low, need at least {needed}")]
    OrderTooLow { order: u32, needed: u32 },

    #[error("jet has nonzero terms of degree <= 1")]
    NotSingular,

    #[error("the cusp ansatz has no solution: {0}")]
    AnsatzUnsolvable(String),

    #[error("genericity exhausted after {0} resamples")]
    GenericityExhausted(usize),

    #[error("point does not lie on the hypersurface")]
    PointNotOnHypersurface,

    #[error("hypersurface is singular at the point")]
    SingularPoint,

    #[error("missing integral for `{0}`")]
    MissingIntegral(String),

    #[error("{0}")]
    Invalid(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
