use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the cap {cap}")]
    FieldTooLarge { p: u32, m: u32, cap: u32 },
    #[error("integer entry {entry} is not an element code of a field of order {q}")]
    EntryOutOfRange { entry: i64, q: u32 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("group order exceeds the cap {cap}")]
    GroupTooLarge { cap: usize },
    #[error("subspace count {count} exceeds the cap {cap}")]
    TooManySubspaces { count: u64, cap: u64 },
    #[error("building of GL_{n}(F_{q}) exceeds the size cap ({reason})")]
    BuildingTooLarge { n: usize, q: u32, reason: String },
    #[error("normalizer scan over {candidates} matrices exceeds the cap {cap}")]
    ScanTooLarge { candidates: u64, cap: u64 },
    #[error("matrix group is not closed under multiplication")]
    NotClosed,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group does not normalize the block subgroup")]
    NotNormalizing,
    #[error("entries do not lie in the subfield fixed by the Frobenius map")]
    NotInFixedField,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
