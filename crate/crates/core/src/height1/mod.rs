//! Height-one Picard and Brauer computations.

use thiserror::Error;

use crate::cohomology::CohomologyError;
use crate::fgab::FgabError;
use crate::sseq::SseqError;

mod descent;
mod families;
mod ko;
mod odd;
mod p2;
mod registry;
mod scenario;
mod units;

pub use descent::{hilbert90, ko2_coinvariants, ko2_descent, ko2nr, Hilbert90, KO_CLASS, KO_NR_CLASS};
pub use ko::{ko2_lbr_route, ko_homotopy, ko_picard, kop_completion, CompletionCheck, LbrRoute};
pub use odd::{odd, ODD_GENERATOR};
pub use p2::p2;
pub use registry::{headline, named, scenario_names};
pub use units::{enumeration_precision, unit_group_pi0, Pi0Elem, Pi0Sphere, StrictUnits, UnitGroupPi0};

pub use families::{adams_row, ku_picard_row, units_group, units_module, unit_generators};
pub use scenario::{
    cochain_comparison, entry_from_e2, flatten_pieces, generator_index, page_comparison, parse_matrix, render_matrix,
    unit_vector, CoefficientRow, DeclaredFact, FactorSpec, NamedClass, Outcome, Readout, ReadoutResult, Rebase,
    ScenarioFile,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Sseq(#[from] SseqError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Fgab(#[from] FgabError),
    #[error("parse error{}: {message}", position.map(|(l, c)| format!(" at line {l}, column {c}")).unwrap_or_default())]
    Parse { position: Option<(usize, usize)>, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("unknown scenario {0:?}")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, ScenarioError>;

#[cfg(test)]
mod tests;
