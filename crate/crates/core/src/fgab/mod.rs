//! Finitely generated abelian groups over the p-adic integers.

use thiserror::Error;

mod ext;
pub mod local;
mod matrix;
mod module;
mod snf;

pub use ext::{assemble_extension, ext_group, hom_group, ExtensionClass};
pub use matrix::IntMatrix;
pub use module::{Elementary, FgModule};
pub use snf::{cokernel, smith_normal_form, Snf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FgabError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integer overflow")]
    Overflow,
    #[error("precision overflow: order {order} exceeds {p}^{precision}")]
    PrecisionOverflow { order: u128, p: u64, precision: u32 },
    #[error("invalid extension class: {0}")]
    InvalidClass(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("map is not continuous: {0}")]
    Discontinuous(String),
    #[error("not solvable: {0}")]
    Unsolvable(String),
}
