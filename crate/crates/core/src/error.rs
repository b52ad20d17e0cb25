use thiserror::Error;

/// Errors raised by the field, matrix, subgroup and atlas operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {p}^{r} exceeds the supported cap of {cap}")]
    FieldTooLarge { p: u64, r: u32, cap: u64 },
    #[error("element encoding {value} is out of range for a field of order {q}")]
    ElementOutOfRange { value: u64, q: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero is neither a square nor a non-square")]
    ZeroNotSquareClass,
    #[error("root of unity of order {n} not rational over GF({q})")]
    RootOfUnityNotRational { n: u64, q: u64 },
    #[error("cannot embed GF({small_p}^{small_r}) into GF({big_p}^{big_r})")]
    IncompatibleEmbedding {
        small_p: u32,
        small_r: u32,
        big_p: u32,
        big_r: u32,
    },
    #[error("modulus {0:?} is not a monic irreducible polynomial")]
    ReducibleModulus(Vec<u32>),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("the identity has no well-defined {0}")]
    IdentityInput(&'static str),
    #[error("order target {0} is not one of 2, 3, 5 or the characteristic")]
    UnsupportedOrderTarget(u32),
    #[error("the zero subgroup has no {0}")]
    ZeroSubgroup(&'static str),
    #[error("family empty for these parameters: {0}")]
    EmptyFamily(String),
    #[error("no cyclic subgroup of order {n} in PGL2(F_{q})")]
    NoCyclic { n: u64, q: u64 },
    #[error("no {family} subgroup in PGL2(F_{q})")]
    NoSuchSubgroup { family: &'static str, q: u64 },
    #[error("semidirect product not closed: mu_{n} is not inside the stabilizer field of gamma")]
    NotClosed { n: u64 },
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("{prime} does not divide the group order {order}")]
    NotADivisor { prime: u64, order: usize },
    #[error("subgroup is not contained in the ambient group")]
    NotContained,
    #[error("group is not p-regular (p divides {0})")]
    NotPRegular(usize),
    #[error("oracle cap exceeded: |PGL2(F_{q})| = {order} > {cap}")]
    OracleCapExceeded { q: u64, order: u64, cap: u64 },
    #[error("classification theorem violated: {0}")]
    ClassificationViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
