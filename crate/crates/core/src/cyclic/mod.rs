//! Cyclic algebras over finite Galois extensions and their cohomological symbols.

use thiserror::Error;

mod algebra;
mod label;
mod ring;
mod semiring;
mod symbol;

pub use algebra::{companion_matrix, twisted_fixed_algebra, CompanionMatrix, RingMatrix, TwistedMatrixAlgebra};
pub use label::{h1_brauer_label, BrauerLabel};
pub use ring::{least_irreducible, GaloisRing, GrElem};
pub use semiring::{conjugation_semiring_coefficients, ConjugationTable, Laurent, LaurentSemiringMatrix};
pub use symbol::{
    class_order, is_coboundary, multiple_order, standard_cocycle, symbol_detect, symbol_sign, tate_class_nonzero,
    FieldUnits, SymbolDetection,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error("not a unit")]
    NotAUnit,
    #[error("fixed subalgebra has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("center has dimension {0}")]
    CenterTooLarge(usize),
    #[error("not a field extension of the prime field: {0}")]
    NotAField(String),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("ring: {0}")]
    Ring(String),
    #[error(transparent)]
    Cohomology(#[from] crate::cohomology::CohomologyError),
    #[error(transparent)]
    Fgab(#[from] crate::fgab::FgabError),
}

pub type Result<T> = std::result::Result<T, CyclicError>;
