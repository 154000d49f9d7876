//! Bigraded spectral sequences with scripted differentials.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::CohomologyError;
use crate::fgab::FgabError;

mod chart;
mod page;
mod script;
mod stem;

pub use chart::{emit_chart, parse_chart, ChartFormat, ParsedChart};
pub use page::{build_e2, turn_page, E2Build, Entry, SseqPage};
pub use script::{
    apply_quadratic_rule, int_rows, transport_differential, Comparison, DifferentialScript, Provenance, ProvenanceTag,
    QuadraticRule, ScriptEntry, Transported,
};
pub use stem::{
    assemble_stem, Declarations, ExtensionRelation, Permanence, SpectralSequence, StemAssembly, StemPiece,
    Vanishing, ZeroRegion,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SseqError {
    #[error(transparent)]
    Fgab(#[from] FgabError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("d_{page} out of {from} lands in {found}, expected {expected}")]
    BidegreeMismatch { page: usize, from: Bidegree, expected: Bidegree, found: Bidegree },
    #[error("composite of d_{page} through {middle} is nonzero")]
    DSquaredNonzero { page: usize, middle: Bidegree },
    #[error("quadratic rule on page {page} needs a class in bidegree ({page},{page}), got {at}")]
    WrongBidegree { page: usize, at: Bidegree },
    #[error("comparison is incompatible with the differential: {0}")]
    IncompatibleComparison(String),
    #[error("window insufficient: {0}")]
    WindowInsufficient(String),
    #[error("unresolved d_{page}: {from} -> {to}")]
    Unresolved { page: usize, from: Bidegree, to: Bidegree },
    #[error("invalid extension data: {0}")]
    InvalidClass(String),
    #[error("{0}")]
    Script(String),
}

pub type Result<T> = std::result::Result<T, SseqError>;

/// A bidegree `(s, t)`; the stem is `t - s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub s: usize,
    pub t: i64,
}

impl Bidegree {
    pub fn new(s: usize, t: i64) -> Self {
        Bidegree { s, t }
    }

    pub fn stem(self) -> i64 {
        self.t - self.s as i64
    }

    /// Target of `d_r`.
    pub fn target(self, r: usize) -> Bidegree {
        Bidegree { s: self.s + r, t: self.t + r as i64 - 1 }
    }

    /// Source of a `d_r` hitting this bidegree.
    pub fn source(self, r: usize) -> Option<Bidegree> {
        (self.s >= r).then(|| Bidegree { s: self.s - r, t: self.t - r as i64 + 1 })
    }
}

impl std::fmt::Display for Bidegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.s, self.t)
    }
}

/// The finite region `0 <= s <= s_max`, `t_min <= t <= t_max` where pages are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub s_max: usize,
    pub t_min: i64,
    pub t_max: i64,
}

impl Window {
    pub fn new(s_max: usize, t_min: i64, t_max: i64) -> Self {
        Window { s_max, t_min, t_max }
    }

    pub fn contains(&self, b: Bidegree) -> bool {
        b.s <= self.s_max && b.t >= self.t_min && b.t <= self.t_max
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        (self.t_min..=self.t_max).flat_map(move |t| (0..=self.s_max).map(move |s| Bidegree { s, t }))
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "s0..{},t{}..{}", self.s_max, self.t_min, self.t_max)
    }
}

impl std::str::FromStr for Window {
    type Err = String;

    /// Parses `s0..S,tA..B`.
    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let (s_part, t_part) = text.split_once(',').ok_or_else(|| format!("window {text:?} lacks ','"))?;
        let s_max = s_part
            .strip_prefix("s0..")
            .ok_or_else(|| format!("window {text:?} must start with s0.."))?
            .parse::<usize>()
            .map_err(|e| format!("window s bound: {e}"))?;
        let t_range = t_part.strip_prefix('t').ok_or_else(|| format!("window {text:?} lacks t range"))?;
        let (a, b) = t_range.split_once("..").ok_or_else(|| format!("window {text:?} lacks t range"))?;
        let t_min = a.parse::<i64>().map_err(|e| format!("window t_min: {e}"))?;
        let t_max = b.parse::<i64>().map_err(|e| format!("window t_max: {e}"))?;
        if t_min > t_max {
            return Err(format!("window {text:?} has empty t range"));
        }
        Ok(Window { s_max, t_min, t_max })
    }
}

#[cfg(test)]
mod tests;
