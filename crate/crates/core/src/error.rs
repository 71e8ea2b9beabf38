use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("a curve needs at least one marked point")]
    EmptyCurve,
    #[error("duplicate point label {0:?}")]
    DuplicatePoint(String),
    #[error("unknown point label {0:?}")]
    UnknownPoint(String),
    #[error("weight must lie in [0,1), got {0}")]
    WeightOutOfRange(Rational),
    #[error("expected {expected} weights, found {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("a bundle needs at least one summand")]
    EmptyBundle,
    #[error("bundles live on different marked curves")]
    CurveMismatch,
    #[error("summand index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("matching has {found} entries but the bundle has rank {expected}")]
    MatchingLength { expected: usize, found: usize },
    #[error("symplectic structure on odd rank {0}")]
    SymplecticOddRank(usize),
    #[error("matching is not an involution at index {0}")]
    NotInvolution(usize),
    #[error("rank {rank} exceeds the enumeration bound {bound}")]
    RankAboveBound { rank: usize, bound: usize },
    #[error("bundle is not semistable")]
    NotSemistable,
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("parabolic degree is {0}, expected zero")]
    NonzeroParDeg(Rational),
    #[error("value line must have parabolic degree zero (found {0})")]
    ValueLineDegree(Rational),
    #[error("auxiliary divisor size {m} is below the required {required}")]
    AuxiliaryTooSmall { m: u64, required: u64 },
    #[error("residue ledger shape does not match the bundle")]
    LedgerShape,
}
