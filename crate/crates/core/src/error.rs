use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic must be odd, got {0}")]
    EvenPrime(u64),
    #[error("prime {0} is outside the supported range (3..=65521)")]
    PrimeOutOfRange(u64),
    #[error("extension degree {0} is outside the supported range 1..={max}", max = crate::field::MAX_DEGREE)]
    DegreeOutOfRange(usize),
    #[error("field order {p}^{m} does not fit in 63 bits")]
    FieldTooLarge { p: u64, m: usize },
    #[error("field of order {0} is too large for exhaustive enumeration")]
    EnumerationTooLarge(u64),
    #[error("modulus must have {expected} coefficients, got {got}")]
    ModulusLength { expected: usize, got: usize },
    #[error("modulus is not monic")]
    NonMonicModulus,
    #[error("modulus coefficient {0} is not reduced mod p")]
    UnreducedCoefficient(u64),
    #[error("modulus is reducible over GF(p)")]
    ReducibleModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a unit mod p")]
    NonUnit(i64),
    #[error("leading coefficient must be nonzero")]
    ZeroLeadCoefficient,
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("u must be nonzero")]
    ZeroU,
    #[error("Tr(v^2) must be nonzero")]
    ZeroTraceVSquared,
    #[error("alpha lies in Im(L_f)")]
    AlphaInImage,
    #[error("beta must be nonzero")]
    ZeroBeta,
    #[error("alpha must be nonzero for this operation")]
    ZeroAlpha,
    #[error("non-integral prediction: {0}")]
    NonIntegralPrediction(String),
    #[error("negative multiplicity: {0}")]
    NegativeMultiplicity(String),
    #[error("defining set is empty")]
    EmptyDefiningSet,
    #[error("dimension collapse: nonzero beta with encoding {witness} gives the zero codeword")]
    DimensionCollapse { witness: u64 },
    #[error("naive and analytic weights differ at beta {beta}: {naive} vs {analytic}")]
    PathsDisagree { beta: u64, naive: u64, analytic: u64 },
    #[error("quadratic form has rank 0")]
    DegenerateForm,
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
