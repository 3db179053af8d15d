use alloc::string::String;

use crate::diffset::DiffSetReport;
use crate::weyl::GluingDefect;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field GF({p}^{n}) is outside the supported range (n >= 1, p^n <= 2^20)")]
    DegreeOutOfRange { p: u64, n: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("field elements belong to different fields")]
    FieldMismatch,
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("order {0} is too large for this operation")]
    TooLarge(u32),
    #[error("{r} is not a unit modulo {modulus}")]
    NotAUnit { r: u32, modulus: u32 },
    #[error("moduli differ ({0} vs {1})")]
    ModulusMismatch(u32, u32),
    #[error("not a difference set: {0}")]
    NotADifferenceSet(DiffSetReport),
    #[error("chamber system has no standard panel-regular cyclic action")]
    UnsupportedChamberSystem,
    #[error("chamber {0} is not in the polygon")]
    ChamberNotFound(u32),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("not a Singer cyclic polygon: {0}")]
    NotSingerCyclic(String),
    #[error("invalid gluing matrix: {0}")]
    InvalidGluing(GluingDefect),
    #[error("invalid Coxeter matrix: {0}")]
    InvalidCoxeter(String),
    #[error("no edge between {0} and {1} in the defining graph")]
    NoSuchEdge(String, String),
}
