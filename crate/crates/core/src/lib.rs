//! Exact continuous cohomology of procyclic-by-cyclic groups, descent spectral
//! sequences with scripted differentials, and cyclic algebras over finite rings.

pub mod arith;
pub mod cli;
pub mod cohomology;
pub mod cyclic;
pub mod fgab;
pub mod height1;
pub mod scalar;
pub mod sseq;

pub use fgab::{FgModule, IntMatrix};

/// Integer type used outside the generic SNF core.
pub type Int = i128;
/// Integer matrix at the library's working width.
pub type Matrix = IntMatrix<Int>;
