use serde::{Deserialize, Serialize};

use crate::fgab::local::solve;
use crate::fgab::IntMatrix;
use crate::sseq::{Bidegree, Result, SseqError, SseqPage};
use crate::Matrix;

/// Where a differential comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceTag {
    AdamsComparison,
    Transported,
    Quadratic,
    Declared,
}

impl std::fmt::Display for ProvenanceTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ProvenanceTag::AdamsComparison => "adams_comparison",
            ProvenanceTag::Transported => "transported",
            ProvenanceTag::Quadratic => "quadratic",
            ProvenanceTag::Declared => "declared",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ProvenanceTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "adams_comparison" => Ok(ProvenanceTag::AdamsComparison),
            "transported" => Ok(ProvenanceTag::Transported),
            "quadratic" => Ok(ProvenanceTag::Quadratic),
            "declared" => Ok(ProvenanceTag::Declared),
            _ => Err(format!("unknown provenance {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tag: ProvenanceTag,
    /// Free-text reference for the fact used.
    pub source: String,
}

impl Provenance {
    pub fn new(tag: ProvenanceTag, source: &str) -> Self {
        Provenance { tag, source: source.to_string() }
    }
}

/// A single `d_r` given by its matrix on the page-`r` generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptEntry {
    pub page: usize,
    pub source: Bidegree,
    pub target: Bidegree,
    /// One row per source generator, one column per target generator.
    #[serde(with = "int_rows")]
    pub matrix: Vec<Vec<i128>>,
    pub provenance: Provenance,
    /// Rows that were declared rather than derived.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub declared_rows: Vec<usize>,
}

impl ScriptEntry {
    pub fn new(page: usize, source: Bidegree, matrix: Vec<Vec<i128>>, provenance: Provenance) -> Self {
        ScriptEntry { page, source, target: source.target(page), matrix, provenance, declared_rows: Vec::new() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialScript {
    pub entries: Vec<ScriptEntry>,
}

impl DifferentialScript {
    pub fn new(entries: Vec<ScriptEntry>) -> Self {
        DifferentialScript { entries }
    }

    pub fn push(&mut self, e: ScriptEntry) {
        self.entries.push(e);
    }

    pub fn max_page(&self) -> usize {
        self.entries.iter().map(|e| e.page).max().unwrap_or(1)
    }

    pub fn on_page(&self, r: usize) -> impl Iterator<Item = &ScriptEntry> {
        self.entries.iter().filter(move |e| e.page == r)
    }

    /// The entry for `d_r` out of `b`, if scripted.
    pub fn find(&self, r: usize, b: Bidegree) -> Option<&ScriptEntry> {
        self.entries.iter().find(|e| e.page == r && e.source == b)
    }

    /// The script with entry `i` removed.
    pub fn without(&self, i: usize) -> DifferentialScript {
        let entries = self.entries.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| e.clone()).collect();
        DifferentialScript { entries }
    }
}

/// Integer matrices as one space-separated string per row.
pub mod int_rows {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<i128>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<i128>>, D::Error> {
        let rows = Vec::<String>::deserialize(d)?;
        rows.iter().map(|r| parse_row(r).map_err(D::Error::custom)).collect()
    }

    pub fn parse_row(r: &str) -> Result<Vec<i128>, String> {
        r.split_whitespace().map(|x| x.parse::<i128>().map_err(|e| format!("{x:?}: {e}"))).collect()
    }
}

/// `d_r(x) = d^{Adams}(x) + x^2` for a class in bidegree `(r, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticRule {
    pub page: usize,
    pub at: Bidegree,
    /// Row vectors in target coordinates, one per source generator.
    pub adams: Vec<Vec<i128>>,
    pub square: Vec<Vec<i128>>,
    pub source: String,
}

pub fn apply_quadratic_rule(page: &SseqPage, rule: &QuadraticRule) -> Result<ScriptEntry> {
    let r = rule.page;
    if rule.at != Bidegree::new(r, r as i64) || page.r() != r {
        return Err(SseqError::WrongBidegree { page: r, at: rule.at });
    }
    let target = rule.at.target(r);
    let tgt = page
        .module(target)
        .ok_or_else(|| SseqError::WindowInsufficient(format!("{target} is outside {}", page.window())))?;
    let src = page
        .module(rule.at)
        .ok_or_else(|| SseqError::WindowInsufficient(format!("{} is outside {}", rule.at, page.window())))?;
    let rows = src.len();
    let adams = IntMatrix::from_rows(tgt.len(), rule.adams.clone())?;
    let square = IntMatrix::from_rows(tgt.len(), rule.square.clone())?;
    if adams.rows() != rows || square.rows() != rows {
        return Err(SseqError::Script(format!("quadratic rule at {} needs {rows} rows", rule.at)));
    }
    let sum = tgt.add_matrices(&adams, &square);
    src.check_hom(tgt, &sum)?;
    Ok(ScriptEntry::new(r, rule.at, sum.to_rows(), Provenance::new(ProvenanceTag::Quadratic, &rule.source)))
}

/// A map of spectral sequences `S -> T` on two bidegrees.
#[derive(Clone, Debug)]
pub struct Comparison {
    /// `S_b -> T_b` on page generators.
    pub at_source: Matrix,
    /// `S_c -> T_c` on page generators.
    pub at_target: Matrix,
}

#[derive(Clone, Debug)]
pub struct Transported {
    pub entry: ScriptEntry,
    /// Target-side source generators not in the image of the comparison.
    pub unconstrained: Vec<usize>,
}

impl Transported {
    /// Fills the unconstrained rows with declared values.
    pub fn complete(mut self, fill: &[(usize, Vec<i128>)]) -> Result<ScriptEntry> {
        for &i in &self.unconstrained {
            let row = fill
                .iter()
                .find(|(j, _)| *j == i)
                .ok_or_else(|| SseqError::Script(format!("row {i} of the transported d_{} is undetermined", self.entry.page)))?;
            self.entry.matrix[i] = row.1.clone();
            self.entry.declared_rows.push(i);
        }
        Ok(self.entry)
    }
}

/// Pushes `d_r: S_b -> S_c` along the comparison to `T_b -> T_c`.
pub fn transport_differential(
    src_page: &SseqPage,
    tgt_page: &SseqPage,
    cmp: &Comparison,
    entry: &ScriptEntry,
) -> Result<Transported> {
    let r = entry.page;
    if src_page.r() != r || tgt_page.r() != r {
        return Err(SseqError::IncompatibleComparison(format!("pages {} and {} for d_{r}", src_page.r(), tgt_page.r())));
    }
    let (b, c) = (entry.source, entry.target);
    let missing = |x: Bidegree| SseqError::WindowInsufficient(format!("{x} is outside a compared window"));
    let sb = src_page.module(b).ok_or_else(|| missing(b))?;
    let sc = src_page.module(c).ok_or_else(|| missing(c))?;
    let tb = tgt_page.module(b).ok_or_else(|| missing(b))?;
    let tc = tgt_page.module(c).ok_or_else(|| missing(c))?;
    sb.check_hom(tb, &cmp.at_source)?;
    sc.check_hom(tc, &cmp.at_target)?;
    let ds = IntMatrix::from_rows(sc.len(), entry.matrix.clone())?;
    sb.check_hom(sc, &ds)?;
    let pushed = tc.compose(&sc.reduce_matrix(&ds), &cmp.at_target)?;
    let ker = crate::fgab::local::kernel(sb, &cmp.at_source, tb)?;
    for k in ker.generators() {
        let img = sb.apply(tc, k, &pushed)?;
        if !tc.is_zero_element(&img) {
            return Err(SseqError::IncompatibleComparison(format!(
                "d_{r} does not vanish on the kernel of the comparison at {b}"
            )));
        }
    }
    let mut matrix = Vec::new();
    let mut unconstrained = Vec::new();
    for i in 0..tb.len() {
        let mut e = vec![0i128; tb.len()];
        e[i] = 1;
        match solve(sb, &cmp.at_source, tb, &e)? {
            Some(x) => matrix.push(sb.apply(tc, &x, &pushed)?),
            None => {
                unconstrained.push(i);
                matrix.push(vec![0; tc.len()]);
            }
        }
    }
    let provenance = Provenance::new(ProvenanceTag::Transported, &entry.provenance.source);
    let entry = ScriptEntry { page: r, source: b, target: c, matrix, provenance, declared_rows: Vec::new() };
    Ok(Transported { entry, unconstrained })
}
