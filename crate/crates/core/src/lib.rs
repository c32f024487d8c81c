//! Exact-arithmetic kernel for rational SFT algebra: brackets, coalgebra
//! coderivations, morphisms from potentials, Maurer-Cartan twisting,
//! linearization and the torsion/order invariants.

pub mod coalgebra;
pub mod coderivation;
pub mod element;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod linearize;
pub mod mctwist;
pub mod monomial;
pub mod morphism;
pub mod parse;
pub mod scalar;
pub mod table;
pub mod zoo;

pub use element::{AlgElement, Ctx, Homogeneity, Truncation};
pub use error::{AlgError, Result};
pub use monomial::Monomial;
pub use parse::{parse_element, ParseError, ParseErrorKind};
pub use scalar::{Scalar, Q};
pub use table::{GeneratorSpec, GeneratorTable, Kind, Side, Var};
