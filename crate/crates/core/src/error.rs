use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library. Variants map onto the CLI exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("prime table limit {limit} must be at least 2")]
    SieveLimitTooSmall { limit: u64 },

    #[error("prime table limit {limit} exceeds the memory budget of {budget}")]
    ResourceLimit { limit: u64, budget: u64 },

    #[error("prime table covers primes up to {have}, but {need} is required")]
    TableTooSmall { have: u64, need: u64 },

    #[error("valuation of zero is undefined")]
    UndefinedValuation,

    #[error("{0} is not prime")]
    NotPrime(u128),

    #[error("|{value}| is at least 2^128; integers this large are not supported")]
    UnsupportedSize { value: BigInt },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degree {degree} is outside the supported range: {reason}")]
    UnsupportedDegree { degree: usize, reason: &'static str },

    #[error("polynomial vanishes identically modulo {p}; every residue is a root")]
    DegenerateModP { p: u64 },

    #[error("p = {p} divides the discriminant; roots mod p may be singular")]
    SingularRoot { p: u64 },

    #[error("modulus {p}^{k} does not fit in 128 bits")]
    ModulusOverflow { p: u64, k: u32 },

    #[error("f_a({n}) = 0, the valuation quantities are undefined")]
    ZeroValue { n: u64 },

    #[error("discriminant of f0 - a vanishes (a = {a})")]
    DiscriminantZero { a: BigInt },

    #[error("f0 - a must be irreducible over Q (a = {a})")]
    IrreducibilityRequired { a: BigInt },

    #[error("ensemble has no irreducible shifts")]
    EmptyEnsemble,

    #[error("(T, N, d) = ({t}, {n}, {d}) lies outside T^(1/(d-1)) < N < T/ln T")]
    WindowViolation { t: u64, n: u64, d: usize },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
