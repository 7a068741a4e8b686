use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown Cartan type `{0}` (expected A_n, D_n, E6, E7 or E8)")]
    UnknownType(String),
    #[error("rank out of range for Cartan type `{0}`")]
    RankOutOfRange(String),
    #[error("node {node} is not a node of a rank {rank} diagram")]
    InvalidNode { node: u32, rank: usize },
    #[error("t-binomial [{n} choose {r}] requested with r > n")]
    ArgumentOutOfRange { n: u32, r: u32 },
    #[error("spectral specifications differ (epsilon orders {0} and {1})")]
    SpecMismatch(u32, u32),
    #[error("monomial {monomial} is not {node}-dominant")]
    NotIDominant { node: u32, monomial: String },
    #[error("highest monomial must be a pure W-monomial, got {0}")]
    NotPureW(String),
    #[error("module is not special: l-dominant monomial {0} acquires a nonzero coefficient")]
    NotSpecial(String),
    #[error("v-degree cap {0} exceeded")]
    CapExceeded(u32),
    #[error("operation is only defined for generic epsilon")]
    RootOfUnityUnsupported,
    #[error("malformed Drinfeld polynomial: {0}")]
    ParseDrinfeld(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("F_{{mn}} is not bar-antisymmetric at (row {row}, column {col})")]
    AntisymmetryViolation { row: usize, col: usize },
}
