use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    AssociativityViolation(usize, usize, usize),
    #[error("unit law fails at basis element {0}")]
    UnitViolation(usize),
    #[error("polynomial is not monic of degree >= 1")]
    NonMonic,
    #[error("bimodule axiom {identity} fails on basis triple ({a}, {b}, {p})")]
    AxiomViolation { identity: &'static str, a: usize, b: usize, p: usize },
    #[error("bimodule is not central: e_{a} f_{p} != f_{p} e_{a}")]
    CentralityViolation { a: usize, p: usize },
    #[error("base algebra is not commutative (e_{0} e_{1} != e_{1} e_{0})")]
    NoncommutativeBase(usize, usize),
    #[error("operator is not first order: {0}")]
    NotFirstOrder(String),
    #[error("module action does not descend to the jet quotient: {0}")]
    ActionDescentFailure(String),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("invalid derivation witness: {0}")]
    InvalidWitness(String),
    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
