use thiserror::Error;

use crate::spin::TwiceSpin;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact table for {count} constituents exceeds the exact threshold {threshold}; use log-domain mode")]
    ExactBudgetExceeded { count: u32, threshold: u32 },

    #[error("exact weights are not available in log-domain mode ({count} constituents)")]
    ExactWeightsUnavailable { count: u32 },

    #[error("log of zero multiplicity: m={m}, 2j={twice_j}")]
    ZeroMultiplicity { m: u32, twice_j: u32 },

    #[error("weights sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("negative weight {weight} for 2j={twice_j}")]
    NegativeWeight { twice_j: u32, weight: f64 },

    #[error("weight on sector 2j={} which has no singlets in this split", .0.twice())]
    UnsupportedSector(TwiceSpin),

    #[error("degeneracy index out of range for 2j={twice_j}: (a={a}, b={b}) but sector has ({max_a}, {max_b})")]
    IndexOutOfRange {
        twice_j: u32,
        a: usize,
        b: usize,
        max_a: usize,
        max_b: usize,
    },

    #[error("the empty invariant subspace admits no mixture")]
    EmptyInvariantSpace,

    #[error("reduced entropy of a fully indexed mixture requires the brute-force oracle")]
    NeedsOracle,

    #[error("dimension {dim} exceeds the oracle cap {cap}")]
    DimensionCapExceeded { dim: u64, cap: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("density matrix invariant violated: {0}")]
    InvalidDensityMatrix(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}
