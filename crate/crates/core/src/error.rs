//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be >= 1")]
    InvalidDegree,
    #[error("field size q = {q} exceeds the supported limit {limit}")]
    FieldTooLarge { q: u64, limit: u64 },
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("discrete logarithm of zero is undefined")]
    DlogOfZero,
    #[error("coefficient {0} is not reduced modulo p = {1}")]
    CoefficientOutOfRange(u32, u32),
    #[error("element does not belong to this field")]
    ForeignElement,
    #[error("additive character value is not a p-th root of unity (deviation {0:.3e})")]
    NotRootOfUnity(f64),
    #[error("expected {expected} character values, got {got}")]
    WrongValueCount { expected: usize, got: usize },
    #[error("operation requires a non-trivial additive character")]
    TrivialAdditiveChar,
    #[error("operation requires a non-trivial multiplicative character")]
    TrivialMultChar,
    #[error("no character of order 2 exists when q is even")]
    NoQuadraticChar,
    #[error("argument a must be nonzero")]
    ZeroArgument,
    #[error("table has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("register {index} has kind {found}, expected {expected}")]
    WrongRegisterKind {
        index: usize,
        expected: &'static str,
        found: &'static str,
    },
    #[error("register index {0} out of range")]
    NoSuchRegister(usize),
    #[error("state vector norm {0} is not 1 within tolerance")]
    NotNormalized(f64),
    #[error("amplitude {0:.3e} on |0>_+ exceeds tolerance; discrete log of zero undefined")]
    AmplitudeOnZero(f64),
    #[error("residual {0:.3e} outside the expected register subspace")]
    ResidualLeakage(f64),
    #[error("rotation plane is degenerate: component norm {0:.3e} too small")]
    DegenerateRotation(f64),
    #[error("root modulus {0} deviates from 1 beyond tolerance; upstream sum is suspect")]
    NonUnimodularRoot(f64),
    #[error("rho must have absolute value 1, got {0}")]
    NonUnimodularRho(f64),
    #[error("{name} must lie in (0, 1), got {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("{name} must be >= 1, got {value}")]
    InvalidCount { name: &'static str, value: u64 },
    #[error("empty sample")]
    EmptySample,
    #[error("simulation limited to q <= {limit}, got q = {q}")]
    SimTooLarge { q: u64, limit: u64 },
    #[error("|Kl| = {abs} violates the Weil bound 2*sqrt(q) = {bound}")]
    WeilBoundViolated { abs: f64, bound: f64 },
    #[error("conjugate symmetry violated by {0:.3e}")]
    ConjugateSymmetryViolated(f64),
}
