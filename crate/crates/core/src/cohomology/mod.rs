//! Continuous cohomology of products of cyclic and procyclic groups.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fgab::local::{kernel, GenOrder, Homology, MarkedModule};
use crate::fgab::{FgModule, FgabError, IntMatrix};
use crate::Matrix;

mod bar;
mod complex;

pub use bar::{
    bar_oracle, bockstein, cocycles_cohomologous, cup_with_unit, CocycleTable, FiniteGroup, Witness,
};
pub use complex::{Cochain, TotalCohomology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Fgab(#[from] FgabError),
    #[error("not an automorphism: {0}")]
    NonAutomorphism(String),
    #[error("actions of generators {0} and {1} do not commute")]
    NonCommutingActions(usize, usize),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("cochain complex too large: {0} coordinates")]
    TooLarge(u128),
    #[error("result changed with precision in degree {degree}: {low} vs {high}")]
    PrecisionUnstable { degree: usize, low: String, high: String },
    #[error("{0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, CohomologyError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    FiniteCyclic(u64),
    /// The p-adic integers `Z_q`.
    Procyclic(u64),
    ProcyclicHat,
}

impl FactorKind {
    pub fn is_procyclic(self) -> bool {
        !matches!(self, FactorKind::FiniteCyclic(_))
    }
}

impl std::fmt::Display for FactorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FactorKind::FiniteCyclic(n) => write!(f, "C{n}"),
            FactorKind::Procyclic(q) => write!(f, "Z{q}"),
            FactorKind::ProcyclicHat => f.write_str("Zhat"),
        }
    }
}

/// Parses `C<n>`, `Z<q>` for a prime `q`, or `Zhat`.
impl std::str::FromStr for FactorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "Zhat" {
            return Ok(FactorKind::ProcyclicHat);
        }
        let number = |rest: &str| rest.parse::<u64>().map_err(|_| format!("bad factor {s:?}"));
        if let Some(rest) = s.strip_prefix('C') {
            let n = number(rest)?;
            return if n == 0 { Err("cyclic factor of order 0".into()) } else { Ok(FactorKind::FiniteCyclic(n)) };
        }
        if let Some(rest) = s.strip_prefix('Z') {
            let q = number(rest)?;
            return if crate::arith::is_prime(q) { Ok(FactorKind::Procyclic(q)) } else { Err(format!("Z{q}: {q} is not prime")) };
        }
        Err(format!("bad factor {s:?}; expected C<n>, Z<p> or Zhat"))
    }
}

/// One cyclic or procyclic factor with a named topological generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub generator: String,
}

impl Factor {
    pub fn new(kind: FactorKind, generator: impl Into<String>) -> Self {
        Factor { kind, generator: generator.into() }
    }
}

/// An ordered product of cyclic and procyclic groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    factors: Vec<Factor>,
}

impl GroupSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(CohomologyError::Shape("a group needs at least one factor".into()));
        }
        if factors.iter().any(|f| f.kind == FactorKind::FiniteCyclic(0)) {
            return Err(CohomologyError::Shape("cyclic factor of order 0".into()));
        }
        Ok(GroupSpec { factors })
    }

    pub fn single(kind: FactorKind, generator: &str) -> Self {
        GroupSpec { factors: vec![Factor::new(kind, generator)] }
    }

    pub fn trivial() -> Self {
        Self::single(FactorKind::FiniteCyclic(1), "1")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of procyclic factors, which bounds the cohomological dimension
    /// when there are no finite factors.
    pub fn procyclic_count(&self) -> usize {
        self.factors.iter().filter(|f| f.kind.is_procyclic()).count()
    }

    pub fn has_finite_factor(&self) -> bool {
        self.factors.iter().any(|f| matches!(f.kind, FactorKind::FiniteCyclic(n) if n > 1))
    }

    fn without(&self, i: usize) -> Option<GroupSpec> {
        let mut f = self.factors.clone();
        f.remove(i);
        (!f.is_empty()).then_some(GroupSpec { factors: f })
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| x.kind.to_string())
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A module with one automorphism per factor generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAction {
    group: GroupSpec,
    module: MarkedModule,
    gens: Vec<Matrix>,
}

impl GAction {
    pub fn new(group: GroupSpec, module: MarkedModule, gens: Vec<Matrix>) -> Result<Self> {
        if gens.len() != group.factors.len() {
            return Err(CohomologyError::Shape(format!(
                "{} action matrices for {} factors",
                gens.len(),
                group.factors.len()
            )));
        }
        for (i, (g, f)) in gens.iter().zip(&group.factors).enumerate() {
            module.check_hom(&module, g)?;
            let inj = kernel(&module, g, &module)?;
            let coker = crate::fgab::local::cokernel_of(&module, g, &module)?;
            if !inj.module().is_empty() || !coker.module().is_empty() {
                return Err(CohomologyError::NonAutomorphism(format!("generator {i} ({})", f.generator)));
            }
            if let FactorKind::FiniteCyclic(n) = f.kind {
                let pow = matrix_power(&module, g, n as u128)?;
                if pow != module.reduce_matrix(&module.identity()) {
                    return Err(CohomologyError::NonAutomorphism(format!(
                        "generator {i} ({}) does not have order dividing {n}",
                        f.generator
                    )));
                }
            }
        }
        let gens = gens.iter().map(|g| module.reduce_matrix(g)).collect();
        Ok(GAction { group, module, gens })
    }

    /// Every generator acts as the identity.
    pub fn trivial(group: GroupSpec, module: MarkedModule) -> Self {
        let gens = vec![module.identity(); group.factors.len()];
        GAction { group, module, gens }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn module(&self) -> &MarkedModule {
        &self.module
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        GAction { group: self.group.clone(), module: self.module.clone().with_precision(precision), gens: self.gens.clone() }
    }

    /// Drops factor `i`, keeping the remaining actions.
    fn without(&self, i: usize) -> Option<GAction> {
        let group = self.group.without(i)?;
        let mut gens = self.gens.clone();
        gens.remove(i);
        Some(GAction { group, module: self.module.clone(), gens })
    }

    pub fn check_commuting(&self) -> Result<()> {
        for a in 0..self.gens.len() {
            for b in a + 1..self.gens.len() {
                let ab = self.module.compose(&self.gens[a], &self.gens[b])?;
                let ba = self.module.compose(&self.gens[b], &self.gens[a])?;
                if ab != ba {
                    return Err(CohomologyError::NonCommutingActions(a, b));
                }
            }
        }
        Ok(())
    }
}

/// `g^e` as an endomorphism of `m`.
pub fn matrix_power(m: &MarkedModule, g: &Matrix, mut e: u128) -> Result<Matrix> {
    let mut acc = m.reduce_matrix(&m.identity());
    let mut base = m.reduce_matrix(g);
    while e > 0 {
        if e & 1 == 1 {
            acc = m.compose(&acc, &base)?;
        }
        base = m.compose(&base, &base)?;
        e >>= 1;
    }
    Ok(acc)
}

/// `1 + g + ... + g^{n-1}`.
pub fn norm_map(m: &MarkedModule, g: &Matrix, n: u64) -> Result<Matrix> {
    let mut acc = IntMatrix::zeros(m.len(), m.len());
    let mut power = m.reduce_matrix(&m.identity());
    for _ in 0..n {
        acc = m.add_matrices(&acc, &power);
        power = m.compose(&power, g)?;
    }
    Ok(acc)
}

/// `g - 1`.
pub fn minus_one(m: &MarkedModule, g: &Matrix) -> Matrix {
    m.sub_matrices(g, &m.identity())
}

/// Runs `f` at the module's precision and two digits higher, and insists on agreement.
fn precision_guarded<F>(act: &GAction, f: F) -> Result<Vec<FgModule>>
where
    F: Fn(&GAction) -> Result<Vec<FgModule>>,
{
    let low = f(act)?;
    let high = f(&act.with_precision(act.module.precision() + 2))?;
    for (degree, (a, b)) in low.iter().zip(&high).enumerate() {
        if a != b {
            return Err(CohomologyError::PrecisionUnstable { degree, low: a.to_string(), high: b.to_string() });
        }
    }
    Ok(low)
}

/// `H^0..H^{s_max}` of a finite cyclic group via the periodic resolution.
pub fn cyclic_cohomology(n: u64, act: &GAction, s_max: usize) -> Result<Vec<FgModule>> {
    if act.group.factors.len() != 1 || act.group.factors[0].kind != FactorKind::FiniteCyclic(n) {
        return Err(CohomologyError::Shape(format!("expected a single cyclic factor of order {n}")));
    }
    precision_guarded(act, |a| TotalCohomology::compute(a, s_max)?.structures())
}

/// `H^0..H^{s_max}` of a single procyclic factor.
pub fn procyclic_cohomology(act: &GAction, s_max: usize) -> Result<Vec<FgModule>> {
    if act.group.factors.len() != 1 || !act.group.factors[0].kind.is_procyclic() {
        return Err(CohomologyError::Shape("expected a single procyclic factor".into()));
    }
    precision_guarded(act, |a| TotalCohomology::compute(a, s_max)?.structures())
}

/// Tate `H^0` of a finite cyclic group: fixed points modulo norms, with representatives.
pub fn tate_hat_zero(n: u64, act: &GAction) -> Result<Homology> {
    if act.group.factors.len() != 1 || act.group.factors[0].kind != FactorKind::FiniteCyclic(n) {
        return Err(CohomologyError::Shape(format!("expected a single cyclic factor of order {n}")));
    }
    let m = &act.module;
    let g = &act.gens[0];
    let norm = norm_map(m, g, n)?;
    Ok(Homology::compute(m, &norm, m, &minus_one(m, g), m)?)
}

/// The two pieces of `0 -> H^1(F, H^{s-1}) -> H^s -> H^0(F, H^s) -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesPieces {
    /// Index of the procyclic factor `F` that was split off.
    pub factor: usize,
    pub sub: FgModule,
    pub quot: FgModule,
    /// Whether `H^s` is the direct sum of the pieces.
    pub split: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCohomology {
    pub degrees: Vec<FgModule>,
    pub pieces: Vec<Option<SesPieces>>,
}

/// Cohomology of a product group, with the procyclic splitting recorded.
pub fn product_cohomology(act: &GAction, s_max: usize) -> Result<ProductCohomology> {
    act.check_commuting()?;
    let degrees = precision_guarded(act, |a| TotalCohomology::compute(a, s_max)?.structures())?;
    let mut pieces = vec![None; s_max + 1];
    let split_at = act.group.factors.iter().position(|f| f.kind.is_procyclic());
    if let (Some(fi), Some(rest)) = (split_at, split_at.and_then(|i| act.without(i))) {
        let rest_coh = TotalCohomology::compute(&rest, s_max)?;
        let f_group = GroupSpec { factors: vec![act.group.factors[fi].clone()] };
        let mut h0 = Vec::new();
        let mut h1 = Vec::new();
        for s in 0..=s_max {
            let hs = rest_coh.degree(s).clone();
            let tau = rest_coh.induced(s, &act.gens[fi])?;
            let single = GAction::new(f_group.clone(), hs, vec![tau])?;
            let c = TotalCohomology::compute(&single, 1)?.structures()?;
            h0.push(c[0].clone());
            h1.push(c[1].clone());
        }
        for s in 0..=s_max {
            let sub = if s == 0 { FgModule::zero(act.module.p(), act.module.precision()) } else { h1[s - 1].clone() };
            let quot = h0[s].clone();
            let total = &degrees[s];
            let sum = sub.direct_sum(&quot)?;
            if sum.free_rank() != total.free_rank() || sum.torsion_order() != total.torsion_order() {
                return Err(CohomologyError::Shape(format!(
                    "degree {s}: pieces {sub} and {quot} do not fit {total}"
                )));
            }
            pieces[s] = Some(SesPieces { factor: fi, split: &sum == total, sub, quot });
        }
    }
    Ok(ProductCohomology { degrees, pieces })
}

/// `H^1` of a procyclic factor as coinvariants, with each generator labelled by `symbol`.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub module: FgModule,
    pub quotient: Homology,
    pub labels: Vec<String>,
}

pub fn h1_as_coinvariants(act: &GAction, symbol: &dyn Fn(&[i128]) -> String) -> Result<Coinvariants> {
    if act.group.factors.len() != 1 || !act.group.factors[0].kind.is_procyclic() {
        return Err(CohomologyError::Shape("expected a single procyclic factor".into()));
    }
    let m = &act.module;
    let zero = MarkedModule::zero(m.p(), m.precision());
    let quotient = Homology::compute(m, &minus_one(m, &act.gens[0]), m, &IntMatrix::zeros(m.len(), 0), &zero)?;
    let labels = quotient.generators().iter().map(|g| symbol(g)).collect();
    Ok(Coinvariants { module: quotient.structure()?, quotient, labels })
}

/// Module with the given generator orders and labels.
pub fn marked(p: u64, precision: u32, gens: &[(GenOrder, &str)]) -> MarkedModule {
    MarkedModule::new(
        p,
        precision,
        gens.iter().map(|g| g.0).collect(),
        gens.iter().map(|g| g.1.to_string()).collect(),
    )
    .expect("orders and labels have equal length")
}

#[cfg(test)]
mod tests;
