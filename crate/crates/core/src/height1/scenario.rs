//! Declarative scenario files and their execution.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cohomology::{marked, Cochain, Factor, FactorKind, GAction, GroupSpec};
use crate::fgab::local::GenOrder;
use crate::height1::{Result, ScenarioError};
use crate::sseq::{
    assemble_stem, build_e2, Bidegree, Declarations, DifferentialScript, E2Build, ExtensionRelation, Provenance,
    ScriptEntry, SpectralSequence, SseqError, SseqPage, StemAssembly, StemPiece, Window,
};
use crate::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSpec {
    /// `C<n>`, `Z<p>` or `Zhat`.
    pub kind: String,
    pub generator: String,
}

/// `pi_t` of the coefficients as a module with one action matrix per factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub t: i64,
    /// Generator orders: an integer, or `inf` for `Z_p`.
    pub orders: Vec<String>,
    pub labels: Vec<String>,
    /// One matrix per factor, rows separated by `;`. Empty means trivial action.
    #[serde(default)]
    pub actions: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

/// A named basis element given by its `E_2` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedClass {
    pub label: String,
    pub e2: Vec<i64>,
}

/// New generators for a bidegree of the last page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rebase {
    pub at: Bidegree,
    pub classes: Vec<NamedClass>,
}

/// A stem to read off the last page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Readout {
    pub name: String,
    pub stem: i64,
    /// Whether the pieces are assembled into a single group.
    #[serde(default = "yes")]
    pub assemble: bool,
    #[serde(default)]
    pub relations: Vec<ExtensionRelation>,
    /// Reported generators of the abutment, with their orders checked.
    #[serde(default)]
    pub generators: Vec<String>,
    pub expected: Option<String>,
}

fn yes() -> bool {
    true
}

/// An input the computation cannot derive, with the statement it rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredFact {
    pub claim: String,
    pub anchor: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub name: String,
    pub p: u64,
    pub precision: u32,
    pub window: Window,
    pub group: Vec<FactorSpec>,
    pub rows: Vec<CoefficientRow>,
    #[serde(default)]
    pub script: Vec<ScriptEntry>,
    #[serde(default)]
    pub declarations: Declarations,
    #[serde(default)]
    pub rebase: Vec<Rebase>,
    #[serde(default)]
    pub readouts: Vec<Readout>,
    #[serde(default)]
    pub facts: Vec<DeclaredFact>,
}

/// The result of reading one stem.
#[derive(Clone, Debug)]
pub struct ReadoutResult {
    pub readout: Readout,
    pub pieces: Vec<StemPiece>,
    pub assembly: Option<StemAssembly>,
    /// Orders of the reported generators, `None` for infinite order.
    pub generator_orders: Vec<Option<u128>>,
}

impl ReadoutResult {
    /// The assembled group, or the graded order when assembly is skipped.
    pub fn rendered(&self) -> String {
        match &self.assembly {
            Some(a) => a.total.to_string(),
            None => {
                let parts: Vec<String> = self.pieces.iter().map(|x| x.structure.to_string()).collect();
                format!("graded {}", if parts.is_empty() { "0".into() } else { parts.join(" | ") })
            }
        }
    }

    pub fn matches(&self) -> bool {
        self.readout.expected.as_ref().map_or(true, |e| *e == self.rendered())
    }

    /// Product of the orders of the finite pieces.
    pub fn graded_order(&self) -> Option<u128> {
        self.pieces.iter().try_fold(1u128, |acc, x| x.structure.order().map(|o| acc * o))
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub e2: E2Build,
    pub ss: SpectralSequence,
    pub readouts: Vec<ReadoutResult>,
}

impl Outcome {
    pub fn readout(&self, name: &str) -> Option<&ReadoutResult> {
        self.readouts.iter().find(|r| r.readout.name == name)
    }

    pub fn matches(&self) -> bool {
        self.readouts.iter().all(ReadoutResult::matches)
    }
}

/// Graded pieces one generator at a time, as `(filtration, order)`.
pub fn flatten_pieces(pieces: &[StemPiece]) -> Vec<(usize, GenOrder)> {
    pieces.iter().flat_map(|x| x.module.orders().iter().map(move |o| (x.at.s, *o))).collect()
}

fn parse_order(s: &str) -> Result<GenOrder> {
    if s == "inf" {
        return Ok(GenOrder::Free);
    }
    match s.parse::<u128>() {
        Ok(n) if n > 1 => Ok(GenOrder::Finite(n)),
        _ => Err(ScenarioError::Invalid(format!("bad generator order {s:?}"))),
    }
}

fn render_order(o: GenOrder) -> String {
    match o {
        GenOrder::Free => "inf".into(),
        GenOrder::Finite(n) => n.to_string(),
    }
}

/// Parses `a b; c d` into rows.
pub fn parse_matrix(text: &str, size: usize) -> Result<Matrix> {
    let rows: Vec<Vec<i128>> = text
        .split(';')
        .map(|r| crate::sseq::int_rows::parse_row(r).map_err(ScenarioError::Invalid))
        .collect::<Result<_>>()?;
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(ScenarioError::Invalid(format!("matrix {text:?} is not {size}x{size}")));
    }
    Ok(Matrix::from_rows(size, rows)?)
}

pub fn render_matrix(m: &Matrix) -> String {
    let rows: Vec<String> =
        m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
    rows.join("; ")
}

impl CoefficientRow {
    /// The row of a given action; trivial actions are stored without matrices.
    pub fn from_action(t: i64, act: &GAction, note: &str) -> Self {
        let m = act.module();
        let trivial = act.generators().iter().all(|g| *g == m.reduce_matrix(&m.identity()));
        CoefficientRow {
            t,
            orders: m.orders().iter().map(|o| render_order(*o)).collect(),
            labels: m.labels().to_vec(),
            actions: if trivial { Vec::new() } else { act.generators().iter().map(render_matrix).collect() },
            note: note.to_string(),
        }
    }
}

impl FactorSpec {
    pub fn new(kind: FactorKind, generator: &str) -> Self {
        FactorSpec { kind: kind.to_string(), generator: generator.to_string() }
    }
}

impl ScenarioFile {
    /// A file with no rows, script or readouts yet.
    pub fn new(name: &str, p: u64, precision: u32, window: Window, group: &GroupSpec) -> Self {
        ScenarioFile {
            name: name.to_string(),
            p,
            precision,
            window,
            group: group.factors().iter().map(|f| FactorSpec::new(f.kind, &f.generator)).collect(),
            rows: Vec::new(),
            script: Vec::new(),
            declarations: Declarations::default(),
            rebase: Vec::new(),
            readouts: Vec::new(),
            facts: Vec::new(),
        }
    }

    /// Adds a row for every `t` of the window where `coeffs` is nonzero.
    pub fn fill_rows(&mut self, coeffs: &dyn Fn(i64) -> Result<Option<(GAction, &'static str)>>) -> Result<()> {
        for t in self.window.t_min..=self.window.t_max {
            if let Some((act, note)) = coeffs(t)? {
                self.rows.push(CoefficientRow::from_action(t, &act, note));
            }
        }
        Ok(())
    }

    pub fn fact(&mut self, claim: &str, anchor: &str) {
        self.facts.push(DeclaredFact { claim: claim.to_string(), anchor: anchor.to_string() });
    }

    /// Runs the script so far and returns the page `E_r`.
    pub fn page(&self, r: usize) -> Result<SseqPage> {
        let e2 = self.e2(self.precision)?;
        let script = DifferentialScript::new(self.script.iter().filter(|e| e.page < r).cloned().collect());
        let mut page = e2.page;
        for _ in 2..r {
            page = crate::sseq::turn_page(&page, &script)?;
        }
        Ok(page)
    }

    pub fn group_spec(&self) -> Result<GroupSpec> {
        let factors = self
            .group
            .iter()
            .map(|f| Ok(Factor::new(f.kind.parse::<FactorKind>().map_err(ScenarioError::Invalid)?, f.generator.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupSpec::new(factors)?)
    }

    fn action(&self, group: &GroupSpec, row: &CoefficientRow, precision: u32) -> Result<GAction> {
        if row.orders.len() != row.labels.len() {
            return Err(ScenarioError::Invalid(format!("row {}: orders and labels differ in length", row.t)));
        }
        let orders = row.orders.iter().map(|o| parse_order(o)).collect::<Result<Vec<_>>>()?;
        let gens: Vec<(GenOrder, &str)> = orders.iter().copied().zip(row.labels.iter().map(String::as_str)).collect();
        let module = marked(self.p, precision, &gens);
        if row.actions.is_empty() {
            return Ok(GAction::trivial(group.clone(), module));
        }
        if row.actions.len() != group.factors().len() {
            return Err(ScenarioError::Invalid(format!("row {}: one action matrix per factor", row.t)));
        }
        let mats = row.actions.iter().map(|a| parse_matrix(a, module.len())).collect::<Result<Vec<_>>>()?;
        Ok(GAction::new(group.clone(), module, mats)?)
    }

    /// Recomputes `E_2` from the group and coefficient rows.
    pub fn e2(&self, precision: u32) -> Result<E2Build> {
        let group = self.group_spec()?;
        let mut seen = BTreeSet::new();
        for r in &self.rows {
            if !seen.insert(r.t) {
                return Err(ScenarioError::Invalid(format!("two coefficient rows for t = {}", r.t)));
            }
        }
        let actions = self
            .rows
            .iter()
            .map(|r| Ok((r.t, self.action(&group, r, precision)?)))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = |t: i64| Ok(actions.iter().find(|(rt, _)| *rt == t).map(|(_, a)| a.clone()));
        Ok(build_e2(&self.name, &group, &coeffs, self.window, self.p, precision)?)
    }

    pub fn validate(&self) -> Result<()> {
        for e in &self.script {
            if e.provenance.source.trim().is_empty() {
                return Err(ScenarioError::Invalid(format!("d_{} out of {} has no provenance", e.page, e.source)));
            }
        }
        for r in &self.readouts {
            if r.relations.iter().any(|x| x.provenance.source.trim().is_empty()) {
                return Err(ScenarioError::Invalid(format!("readout {} has a relation without provenance", r.name)));
            }
        }
        for s in self.declarations.sources() {
            if s.trim().is_empty() {
                return Err(ScenarioError::Invalid("declaration without provenance".into()));
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Outcome> {
        self.run_at(self.precision)
    }

    pub fn run_at(&self, precision: u32) -> Result<Outcome> {
        self.validate()?;
        let e2 = self.e2(precision)?;
        let script = DifferentialScript::new(self.script.clone());
        let mut ss = SpectralSequence::run(e2.page.clone(), script, self.declarations.clone())?;
        for rb in &self.rebase {
            let entry = ss
                .final_page()
                .entry(rb.at)
                .ok_or_else(|| SseqError::WindowInsufficient(format!("{} is outside the window", rb.at)))?;
            let gens = rb
                .classes
                .iter()
                .map(|c| {
                    let x: Vec<i128> = c.e2.iter().map(|&v| v as i128).collect();
                    let y = entry
                        .from_e2(&x)?
                        .ok_or_else(|| ScenarioError::Invalid(format!("{} does not survive at {}", c.label, rb.at)))?;
                    Ok((c.label.clone(), y))
                })
                .collect::<Result<Vec<_>>>()?;
            ss.rebase_final(rb.at, &gens)?;
        }
        let mut readouts = Vec::new();
        for r in &self.readouts {
            let pieces = ss.read_stem(r.stem)?;
            let assembly = if !r.assemble {
                None
            } else if pieces.is_empty() {
                Some(StemAssembly::empty(r.stem, self.p, precision))
            } else {
                Some(assemble_stem(r.stem, pieces.clone(), r.relations.clone())?)
            };
            let generator_orders = match &assembly {
                Some(a) if !r.generators.is_empty() => {
                    let labels: Vec<&str> = r.generators.iter().map(String::as_str).collect();
                    if !a.generated_by(&labels)? {
                        return Err(ScenarioError::Invalid(format!("{} do not generate {}", labels.join(", "), r.name)));
                    }
                    labels.iter().map(|l| a.order_of(l)).collect::<std::result::Result<Vec<_>, _>>()?
                }
                _ => Vec::new(),
            };
            readouts.push(ReadoutResult { readout: r.clone(), pieces, assembly, generator_orders });
        }
        Ok(Outcome { e2, ss, readouts })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| ScenarioError::Invalid(e.to_string()))
    }

    /// Parses a scenario file, reporting the position of syntax errors.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let position = e.span().map(|s| line_col(text, s.start));
            ScenarioError::Parse { position, message: e.message().to_string() }
        })
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// `d_r` out of `source`, given on `E_2` representatives: row `i` of
/// `e2_images` is the `E_2` image of the `i`-th `E_2` generator.
pub fn entry_from_e2(
    page: &SseqPage,
    source: Bidegree,
    e2_images: &[Vec<i128>],
    provenance: Provenance,
) -> Result<ScriptEntry> {
    let r = page.r();
    let target = source.target(r);
    let missing = |b: Bidegree| SseqError::WindowInsufficient(format!("{b} is outside {}", page.window()));
    let src = page.entry(source).ok_or_else(|| missing(source))?;
    let tgt = page.entry(target).ok_or_else(|| missing(target))?;
    let width = e2_images.first().map_or(0, Vec::len);
    let mut matrix = Vec::new();
    for i in 0..src.module().len() {
        let lift = src.lift_to_e2(i)?;
        if lift.len() != e2_images.len() {
            return Err(ScenarioError::Invalid(format!("{} E_2 images given for {source}", e2_images.len())));
        }
        let mut image = vec![0i128; width];
        for (c, row) in lift.iter().zip(e2_images) {
            for (x, y) in image.iter_mut().zip(row) {
                *x += c * y;
            }
        }
        let coords = tgt
            .from_e2(&image)?
            .ok_or_else(|| ScenarioError::Invalid(format!("image of d_{r} out of {source} is not a cycle at {target}")))?;
        matrix.push(coords);
    }
    Ok(ScriptEntry::new(r, source, matrix, provenance))
}

/// Map between `E_2` pages given by sending a cocycle of `from` to the
/// cocycle of `to` with the same value on `embed` of its multi-degree.
pub fn cochain_comparison(
    from: &E2Build,
    to: &E2Build,
    b: Bidegree,
    embed: &dyn Fn(&[usize]) -> Vec<usize>,
) -> Result<Matrix> {
    let src = from.rows.get(&b.t).ok_or_else(|| ScenarioError::Invalid(format!("no row {} to compare", b.t)))?;
    let width = to.page.module(b).map_or(0, |m| m.len());
    let mut rows = Vec::new();
    for i in 0..src.degree(b.s).len() {
        let rep = src.representative(b.s, i)?;
        let pushed = Cochain { terms: rep.terms.iter().map(|(m, v)| (embed(m), v.clone())).collect() };
        rows.push(to.coords(b, &pushed)?);
    }
    Ok(Matrix::from_rows(width, rows)?)
}

/// Transfers an `E_2`-level comparison matrix at `b` to generators of two later pages.
pub fn page_comparison(from: &SseqPage, to: &SseqPage, b: Bidegree, e2_matrix: &Matrix) -> Result<Matrix> {
    let missing = |x: Bidegree| SseqError::WindowInsufficient(format!("{x} is outside a compared window"));
    let src = from.entry(b).ok_or_else(|| missing(b))?;
    let tgt = to.entry(b).ok_or_else(|| missing(b))?;
    let mut rows = Vec::new();
    for i in 0..src.module().len() {
        let lift = src.lift_to_e2(i)?;
        let row = Matrix::from_rows(lift.len(), vec![lift])?.checked_mul(e2_matrix)?;
        let image = tgt
            .from_e2(row.row(0))?
            .ok_or_else(|| ScenarioError::Invalid(format!("comparison at {b} leaves the cycles")))?;
        rows.push(image);
    }
    Ok(Matrix::from_rows(tgt.module().len(), rows)?)
}

/// Index of the `E_2` generator with the given label.
pub fn generator_index(page: &SseqPage, b: Bidegree, label: &str) -> Result<usize> {
    page.module(b)
        .and_then(|m| m.labels().iter().position(|l| l == label))
        .ok_or_else(|| ScenarioError::Invalid(format!("no generator {label} at {b}")))
}

/// Standard basis vector `e_i` of length `n`.
pub fn unit_vector(n: usize, i: usize) -> Vec<i128> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}
