use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("modulus polynomial is reducible over GF({p})")]
    ReducibleModulus { p: u32 },
    #[error("field size {size} exceeds cap {cap}")]
    SizeCapExceeded { size: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("subspace lattice would have {size} elements, cap is {cap}")]
    LatticeTooLarge { size: u64, cap: u64 },
    #[error("expected {expected} columns, got {got}")]
    ColumnCountMismatch { expected: usize, got: usize },
    #[error("operands live on different lattices")]
    MixedLattices,
    #[error("interval endpoints are not nested")]
    NotNested,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("rank table has {got} entries, lattice has {expected}")]
    TableSizeMismatch { expected: usize, got: usize },
    #[error("rank axioms failed: {0}")]
    AxiomsFailed(String),
    #[error("subspace does not belong to the lattice")]
    SubspaceNotInLattice,
    #[error("isomorphism search space {size} exceeds cap {cap}")]
    SearchCapExceeded { size: u64, cap: u64 },
    #[error("submodular function lacks required flags: {0}")]
    FlagsMissing(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element lies in the base field")]
    ElementInBaseField,
    #[error("operation requires ambient F_2^4")]
    WrongAmbient,
    #[error("lattice with {size} subspaces is too large for a diagram (cap {cap}, use the override)")]
    TooLargeForDiagram { size: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
