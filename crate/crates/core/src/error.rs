use thiserror::Error;

use crate::padic::SquareClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{}", not_odd_prime(*.0))]
    NotOddPrime(i128),

    #[error("zero input: {0}")]
    Zero(&'static str),

    #[error("division by zero")]
    DivisionByZero,

    #[error("not a square in Q_p (square class {0})")]
    NotASquare(SquareClass),

    #[error("p-adic precision exhausted")]
    PrecisionExhausted,

    #[error("values belong to different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("form parameter {0} is outside the catalog")]
    OutsideCatalog(String),

    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),

    #[error("no consistent Cardano branch: {0}")]
    NoConsistentBranch(String),

    #[error("point lies on the singular locus 1 - p*alpha*beta*gamma = 0")]
    SingularLocus,

    #[error("density is undefined at the point at infinity")]
    InfiniteCoordinate,

    #[error("malformed region: {0}")]
    MalformedRegion(String),

    #[error("unknown group tag `{0}`")]
    UnknownGroup(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn not_odd_prime(n: i128) -> String {
    if n == 2 {
        "2 is prime but not odd".to_string()
    } else {
        format!("{n} is not prime")
    }
}
