use thiserror::Error;

use crate::parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("operands live in different contexts or generator tables")]
    ContextMismatch,
    #[error("input is not homogeneous")]
    InhomogeneousInput,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },
    #[error("master equation {{h,h}} = 0 fails")]
    MasterEquationFails,
    #[error("element is not in the ideal of terms containing a p-variable")]
    NotOverline,
    #[error("element is not in the ideal of terms containing both p- and q-variables")]
    NotHat,
    #[error("element is not a Maurer-Cartan element")]
    NotMaurerCartan,
    #[error("element does not have strictly positive filtration level")]
    ZeroFiltration,
    #[error("potential does not intertwine the two Hamiltonians")]
    NotChainMap,
    #[error("potential is not an augmentation")]
    NotAugmentation,
    #[error("fixed-point iteration did not stabilize within {0} rounds")]
    NonTerminating(usize),
    #[error("input word length {found} exceeds cutoff {cutoff}")]
    CutoffExceeded { cutoff: usize, found: usize },
    #[error("bracket {{h,g}} is not zero")]
    BracketNotZero,
    #[error("order homotopy identity fails")]
    HomotopyFails,
    #[error("invalid generator table: {0}")]
    InvalidTable(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{name}` is not declared on side {side}")]
    UndeclaredSide { name: String, side: String },
    #[error("operation requires rational scalars")]
    NotRational,
    #[error("{0}")]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, AlgError>;
