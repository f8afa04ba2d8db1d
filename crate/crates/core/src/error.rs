use thiserror::Error;

/// Errors surfaced by the lattice and representation kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty or invalid partition: {0}")]
    BadPartition(String),

    #[error("permutation degree {found} does not match n = {expected}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("matrix is rank deficient")]
    RankDeficient,

    #[error("not a sublattice")]
    NotSublattice,

    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("valuation of zero is infinite")]
    ZeroValuation,

    #[error("hook index k = {k} out of range for n = {n}")]
    BadHookIndex { n: usize, k: usize },

    #[error("hom space has rank {0}, expected 1")]
    HomRankNotOne(usize),

    #[error("head of the reduction is not multiplicity-free (factor of dim {dim} occurs {mult} times)")]
    HeadNotMultiplicityFree { dim: usize, mult: usize },

    #[error("feasibility limit exceeded: {0}")]
    Feasibility(String),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("{0}")]
    Domain(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
