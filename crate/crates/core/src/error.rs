use thiserror::Error;

/// Errors raised across the crate.
///
/// Index payloads are 1-based, matching how indices appear in spec files
/// and CLI output.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty index set (rank 0)")]
    EmptyIndexSet,
    #[error("matrix is not square")]
    NotSquare,
    #[error("Cartan matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("positive off-diagonal entry at ({i}, {j})")]
    PositiveOffDiagonal { i: usize, j: usize },
    #[error("a_ij = 0 but a_ji != 0 at ({i}, {j})")]
    AsymmetricZeroPattern { i: usize, j: usize },
    #[error("2 a_ij / a_ii is not an integer at ({i}, {j})")]
    NonIntegralQuotient { i: usize, j: usize },
    #[error("matrix admits no positive diagonal symmetrizer (cycle at ({i}, {j}))")]
    NotSymmetrizable { i: usize, j: usize },

    #[error("image is not a permutation of 1..={n}")]
    NotPermutation { n: usize },
    #[error("automorphism does not preserve the Cartan matrix at ({i}, {j})")]
    MatrixNotPreserved { i: usize, j: usize },

    #[error("weight is not symmetric under the diagram automorphism")]
    NotSymmetricWeight,
    #[error("weight is not in the image of the orbit transport: {0}")]
    NotInImage(String),
    #[error("pairing needs (anchor, anchor), which is not stored")]
    InsufficientData,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("index {0} is not a real simple root")]
    NotRealIndex(usize),
    #[error("index {0} is not a real index of the orbit algebra")]
    NotFoldableIndex(usize),
    #[error("reflection along index {0} shifts by a non-integral multiple")]
    NonIntegralShift(usize),
    #[error("weight is not strictly dominant on the real orbit indices")]
    NotStrictlyDominant,
    #[error("node budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("orbit parity is inconsistent (start weight has a nontrivial stabilizer)")]
    SignInconsistent,

    #[error("series constant term is not a unit")]
    NonUnitConstantTerm,
    #[error("series depth or rank mismatch")]
    DepthMismatch,
    #[error("highest weight is not integrable")]
    NotIntegrable,
    #[error("negative root multiplicity at {0}")]
    NegativeMultiplicity(String),
    #[error("decomposition residual is nonzero off the norm shell at {0}")]
    DecompositionResidual(String),

    #[error("twining map does not preserve the radical of the contravariant form")]
    RadicalNotPreserved,
    #[error("no generic anchor found after {0} attempts")]
    GenericityFailure(usize),

    #[error("phases violate xi'_i = 1/xi_i at ({i}, {j:?})")]
    InverseConstraintViolated { i: usize, j: Option<usize> },
    #[error("phase is zero at index {0}")]
    ZeroPhase(usize),
    #[error("truncation tail bound too large at sample point {0}")]
    TailBoundTooLarge(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
