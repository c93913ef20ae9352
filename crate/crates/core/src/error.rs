use thiserror::Error;

/// Errors raised by the laboratory. Variants that correspond to a violated
/// hypothesis of a theorem name that hypothesis in their message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("size cap exceeded: {what} = {value} > cap {cap}")]
    SizeCapExceeded { what: &'static str, value: u128, cap: u128 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    MixedFields,
    #[error("operands use different variable lists: {0:?} vs {1:?}")]
    MixedVariables(Vec<String>, Vec<String>),
    #[error("no value supplied for variable `{0}`")]
    MissingVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial is not bivariate (variables: {0:?})")]
    NotBivariate(Vec<String>),
    #[error("kernel is not symmetric: F(a,x) = F(x,a) fails")]
    NotSymmetric,
    #[error("kernel is diagonal: it has no mixed monomial a^i x^j with i, j >= 1")]
    Diagonal,
    #[error("kernel degree {deg} is not below the characteristic {char}: requires deg(F) < char")]
    DegreeTooLarge { deg: i64, char: u64 },
    #[error("Q is constant")]
    ConstantQ,
    #[error("exponent {0} is not a power of the characteristic")]
    NotAdditiveShape(u32),
    #[error("curve equation vanishes identically (kernel validation bug)")]
    DegenerateCurve,
    #[error("total degree {deg} exceeds factorization cap {cap}")]
    DegreeCapExceeded { deg: i64, cap: i64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("curve is not absolutely irreducible; the Weil interval does not apply")]
    NotAbsolutelyIrreducible,
    #[error("adjacency is not symmetric at vertices {0} and {1}")]
    SymmetryViolation(usize, usize),
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    RegularityViolation { vertex: usize, degree: usize, expected: usize },
    #[error("power iteration did not converge (residual {residual:e} after {iterations} iterations)")]
    ConvergenceFailure { residual: f64, iterations: usize },
    #[error("G and H are algebraically dependent")]
    DependentGH,
    #[error("characteristic {char} must exceed k = {k}")]
    CharTooSmall { char: u64, k: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
