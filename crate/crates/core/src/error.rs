use thiserror::Error;

/// Errors raised by the library. Variants carry enough context for a caller
/// to report what was rejected and why.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("squarefree parameter expected, got {0}")]
    NotSquarefree(String),
    #[error("quadratic field mismatch: Q(sqrt {0}) vs Q(sqrt {1})")]
    FieldMismatch(String, String),
    #[error("singular curve: discriminant vanishes for a = {a}, b = {b}")]
    SingularCurve { a: String, b: String },
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("group is not transitive; orbit {0:?} is proper")]
    NotTransitive(Vec<usize>),
    #[error("group contains no transposition")]
    NoTransposition,
    #[error("closure exceeded {0} elements")]
    GroupTooLarge(usize),
    #[error("odd degree {n}: {witness} is an even permutation with a single cycle")]
    OddDegree { n: usize, witness: String },
    #[error("degree {0} exceeds the exhaustive bound {1}")]
    DegreeTooLarge(usize, usize),
    #[error("point is torsion of order {0}")]
    TorsionPoint(u32),
    #[error("start {start} lies inside or left of the real locus; the largest real root of x^3+ax+b is about {root_bound}")]
    StartBelowRealRoot { start: String, root_bound: f64 },
    #[error("candidate scan exhausted after {0} steps")]
    ScanExhausted(u64),
    #[error("path tracking failed: {0}")]
    TrackingFailure(String),
    #[error("cycle type mismatch at branch value {value}: expected {expected:?}, tracked {found:?}")]
    CycleTypeMismatch { value: String, expected: Vec<usize>, found: Vec<usize> },
    #[error("certificate rejected ({layer}): {detail}")]
    Certificate { layer: String, detail: String },
    #[error("construction check failed: {0}")]
    Construction(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
