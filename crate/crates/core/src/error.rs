use thiserror::Error;

/// Errors raised by the arithmetic, recurrence and prediction layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^63")]
    NotPrime(u64),
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("residues belong to different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),
    #[error("0 has no inverse modulo {0}")]
    ZeroInverse(u64),
    #[error("denominator {den} is divisible by {p}")]
    DenominatorDivisible { den: String, p: u64 },
    #[error("Jacobi symbol needs an odd positive modulus")]
    EvenModulus,
    #[error("the prime 2 is not admissible here")]
    EvenPrime,
    #[error("m must be nonzero modulo {0}")]
    ZeroM(u64),
    #[error("offset d = {d} outside the admissible range ({lo}, {hi}]")]
    DRange { d: i64, lo: i64, hi: String },
    #[error("discriminant of the characteristic polynomial vanishes modulo {0}")]
    SingularDiscriminant(u64),
    #[error("repeated root {0} in Sylvester evaluation")]
    RepeatedRoot(u64),
    #[error("zero root in Sylvester evaluation")]
    ZeroRoot,
    #[error("Lucas parameter B must be invertible modulo {0}")]
    ZeroB(u64),
    #[error("discriminant A^2 - 4B vanishes modulo {0}")]
    SingularDelta(u64),
    #[error("division by zero in Z[omega]")]
    DivisionByZero,
    #[error("modulus norm is divisible by 3")]
    NotCoprimeToThree,
    #[error("class undefined: p divides c^2 + 3")]
    Undefined,
    #[error("degenerate parameter: p divides c(c^2 + 3)")]
    DegenerateC,
    #[error("discriminant is a quadratic non-residue modulo {0}")]
    NoSquareRoot(u64),
    #[error("discriminant vanishes modulo {0}")]
    SingularD(u64),
    #[error("polynomial degree {0} is too small")]
    DegreeTooSmall(usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree modulo {0}")]
    NotSquarefree(u64),
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
    #[error("missing parameter {0:?}")]
    MissingParam(&'static str),
    #[error("parameter violates a precondition: {0}")]
    InvalidParam(String),
    #[error("enumeration of {terms} terms exceeds the budget of {budget}")]
    BudgetExceeded { terms: String, budget: u64 },
    #[error("{0} has no representation x^2 + 3y^2")]
    NoRepresentation(u64),
    #[error("quintisection identity fails at d = {d}, r = {r}")]
    IdentityViolation { d: u32, r: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
