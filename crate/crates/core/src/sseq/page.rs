use std::collections::{BTreeMap, HashMap};

use crate::cohomology::{product_cohomology, GAction, GroupSpec, ProductCohomology, TotalCohomology};
use crate::fgab::local::{cokernel_of, kernel, solve, GenOrder, Homology, MarkedModule};
use crate::fgab::{FgModule, FgabError, IntMatrix};
use crate::sseq::{Bidegree, DifferentialScript, Result, ScriptEntry, SseqError, Window};
use crate::Matrix;

#[derive(Clone, Debug)]
enum Step {
    Subquotient(Homology),
    Rebase { old: MarkedModule, old_of_new: Matrix, new_of_old: Matrix },
}

/// One bidegree of a page, with the subquotient history back to `E_2`.
#[derive(Clone, Debug)]
pub struct Entry {
    module: MarkedModule,
    steps: Vec<Step>,
}

impl Entry {
    pub fn new(module: MarkedModule) -> Self {
        Entry { module, steps: Vec::new() }
    }

    pub fn module(&self) -> &MarkedModule {
        &self.module
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_empty()
    }

    /// Coordinates on this page of an `E_2` element, or `None` if it does not
    /// survive as a cycle.
    pub fn from_e2(&self, x: &[i128]) -> Result<Option<Vec<i128>>> {
        let mut cur = x.to_vec();
        for step in &self.steps {
            cur = match step {
                Step::Subquotient(h) => match h.coords(&h.middle().reduce(&cur)) {
                    Ok(c) => c,
                    Err(FgabError::Unsolvable(_)) => return Ok(None),
                    Err(e) => return Err(e.into()),
                },
                Step::Rebase { old, new_of_old, .. } => {
                    let target = self.rebased_module(step);
                    old.apply(target, &cur, new_of_old)?
                }
            };
        }
        Ok(Some(self.module.reduce(&cur)))
    }

    fn rebased_module<'a>(&'a self, step: &Step) -> &'a MarkedModule {
        let at = self.steps.iter().position(|s| std::ptr::eq(s, step)).expect("own step");
        self.steps[at + 1..]
            .iter()
            .find_map(|s| match s {
                Step::Subquotient(h) => Some(h.middle()),
                Step::Rebase { old, .. } => Some(old),
            })
            .unwrap_or(&self.module)
    }

    /// `E_2` representative of generator `i`.
    pub fn lift_to_e2(&self, i: usize) -> Result<Vec<i128>> {
        let mut cur = vec![0i128; self.module.len()];
        cur[i] = 1;
        for step in self.steps.iter().rev() {
            cur = match step {
                Step::Subquotient(h) => {
                    let gens = IntMatrix::from_rows(h.middle().len(), h.generators().to_vec())?;
                    let row = IntMatrix::from_rows(cur.len(), vec![cur.clone()])?;
                    h.middle().compose(&row, &gens)?.row(0).to_vec()
                }
                Step::Rebase { old, old_of_new, .. } => {
                    let row = IntMatrix::from_rows(cur.len(), vec![cur.clone()])?;
                    old.compose(&row, old_of_new)?.row(0).to_vec()
                }
            };
        }
        Ok(cur)
    }

    /// Replaces the generators by the given elements, which must form a basis.
    pub fn rebase(&self, gens: &[(String, Vec<i128>)]) -> Result<Entry> {
        let old = &self.module;
        let orders: Vec<GenOrder> = gens.iter().map(|(_, v)| element_order(old, v)).collect();
        let labels = gens.iter().map(|(l, _)| l.clone()).collect();
        let new = MarkedModule::new(old.p(), old.precision(), orders, labels)?;
        let old_of_new = IntMatrix::from_rows(old.len(), gens.iter().map(|(_, v)| old.reduce(v)).collect())?;
        new.check_hom(old, &old_of_new)?;
        let k = kernel(&new, &old_of_new, old)?;
        let c = cokernel_of(&new, &old_of_new, old)?;
        if !k.module().is_empty() || !c.module().is_empty() {
            return Err(SseqError::Script("proposed generators do not form a basis".into()));
        }
        let mut rows = Vec::new();
        for j in 0..old.len() {
            let mut e = vec![0i128; old.len()];
            e[j] = 1;
            let x = solve(&new, &old_of_new, old, &e)?
                .ok_or_else(|| SseqError::Script("proposed generators do not span".into()))?;
            rows.push(x);
        }
        let new_of_old = IntMatrix::from_rows(new.len(), rows)?;
        let mut steps = self.steps.clone();
        steps.push(Step::Rebase { old: old.clone(), old_of_new, new_of_old });
        Ok(Entry { module: new, steps })
    }
}

/// Order of an element of a marked module.
fn element_order(m: &MarkedModule, x: &[i128]) -> GenOrder {
    let y = m.reduce(x);
    let mut order: u128 = 1;
    for (j, &v) in y.iter().enumerate() {
        if v == 0 {
            continue;
        }
        match m.orders()[j] {
            GenOrder::Free => return GenOrder::Free,
            GenOrder::Finite(n) => {
                let o = n / crate::arith::gcd(v as u128, n);
                order = crate::arith::lcm(order, o);
            }
        }
    }
    GenOrder::Finite(order)
}

/// The `E_r` page on a finite window.
#[derive(Clone, Debug)]
pub struct SseqPage {
    name: String,
    r: usize,
    p: u64,
    precision: u32,
    window: Window,
    entries: BTreeMap<Bidegree, Entry>,
}

impl SseqPage {
    /// A page with every bidegree of the window zero.
    pub fn new(name: &str, r: usize, p: u64, precision: u32, window: Window) -> Self {
        let entries = window.bidegrees().map(|b| (b, Entry::new(MarkedModule::zero(p, precision)))).collect();
        SseqPage { name: name.to_string(), r, p, precision, window, entries }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// `None` outside the window: such bidegrees are unknown, not zero.
    pub fn entry(&self, b: Bidegree) -> Option<&Entry> {
        self.entries.get(&b)
    }

    pub fn module(&self, b: Bidegree) -> Option<&MarkedModule> {
        self.entries.get(&b).map(Entry::module)
    }

    pub fn structure(&self, b: Bidegree) -> Result<Option<FgModule>> {
        self.module(b).map(|m| m.structure().map_err(SseqError::from)).transpose()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Bidegree, &Entry)> {
        self.entries.iter().map(|(b, e)| (*b, e))
    }

    pub fn set_module(&mut self, b: Bidegree, module: MarkedModule) -> Result<()> {
        if !self.window.contains(b) {
            return Err(SseqError::WindowInsufficient(format!("{b} is outside {}", self.window)));
        }
        self.entries.insert(b, Entry::new(module));
        Ok(())
    }

    /// Renames the generators at `b` to the given basis elements.
    pub fn rebase(&mut self, b: Bidegree, gens: &[(String, Vec<i128>)]) -> Result<()> {
        let e = self
            .entries
            .get(&b)
            .ok_or_else(|| SseqError::WindowInsufficient(format!("{b} is outside {}", self.window)))?;
        let new = e.rebase(gens)?;
        self.entries.insert(b, new);
        Ok(())
    }

    /// Equality of name, page, window and every entry's generators.
    pub fn same_structure(&self, other: &SseqPage) -> bool {
        self.name == other.name
            && self.r == other.r
            && self.p == other.p
            && self.window == other.window
            && self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|((a, x), (b, y))| {
                a == b && x.module.orders() == y.module.orders() && x.module.labels() == y.module.labels()
            })
    }
}

/// An `E_2` page with the cohomology computations behind each row.
#[derive(Clone, Debug)]
pub struct E2Build {
    pub page: SseqPage,
    pub rows: BTreeMap<i64, TotalCohomology>,
    pub pieces: BTreeMap<i64, ProductCohomology>,
}

impl E2Build {
    /// Coordinates in `E_2^{s,t}` of a cocycle given on the row's total complex.
    pub fn coords(&self, b: Bidegree, cochain: &crate::cohomology::Cochain) -> Result<Vec<i128>> {
        let row = self
            .rows
            .get(&b.t)
            .ok_or_else(|| SseqError::Script(format!("row {} has no coefficients", b.t)))?;
        Ok(row.coords(b.s, cochain)?)
    }
}

/// `E_2^{s,t} = H^s(G, M_t)` over the window; `coeffs(t)` of `None` is the zero module.
pub fn build_e2(
    name: &str,
    group: &GroupSpec,
    coeffs: &dyn Fn(i64) -> Result<Option<GAction>>,
    window: Window,
    p: u64,
    precision: u32,
) -> Result<E2Build> {
    let mut page = SseqPage::new(name, 2, p, precision, window);
    let mut rows = BTreeMap::new();
    let mut pieces = BTreeMap::new();
    for t in window.t_min..=window.t_max {
        let Some(act) = coeffs(t)? else { continue };
        if act.group() != group {
            return Err(SseqError::Script(format!("row {t} is acted on by {} instead of {group}", act.group())));
        }
        let guarded = product_cohomology(&act, window.s_max)?;
        let total = TotalCohomology::compute(&act, window.s_max)?;
        for s in 0..=window.s_max {
            let m = total.degree(s).clone();
            if m.structure()? != guarded.degrees[s] {
                return Err(SseqError::Script(format!("E_2 at ({s},{t}) disagrees between computations")));
            }
            page.entries.insert(Bidegree::new(s, t), Entry::new(m));
        }
        rows.insert(t, total);
        pieces.insert(t, guarded);
    }
    Ok(E2Build { page, rows, pieces })
}

fn matrix_of(e: &ScriptEntry, src: &MarkedModule, tgt: &MarkedModule) -> Result<Matrix> {
    if e.matrix.len() != src.len() {
        return Err(SseqError::Script(format!(
            "d_{} out of {} has {} rows for {} generators",
            e.page,
            e.source,
            e.matrix.len(),
            src.len()
        )));
    }
    let m = IntMatrix::from_rows(tgt.len(), e.matrix.clone())?;
    src.check_hom(tgt, &m)?;
    Ok(tgt.reduce_matrix(&m))
}

/// Validates the page-`r` part of `script` and returns `E_{r+1}`.
pub fn turn_page(page: &SseqPage, script: &DifferentialScript) -> Result<SseqPage> {
    let r = page.r;
    let mut outgoing: HashMap<Bidegree, (Bidegree, Matrix)> = HashMap::new();
    let mut incoming: HashMap<Bidegree, Bidegree> = HashMap::new();
    for e in script.on_page(r) {
        let expected = e.source.target(r);
        if e.target != expected {
            return Err(SseqError::BidegreeMismatch { page: r, from: e.source, expected, found: e.target });
        }
        let (Some(src), Some(tgt)) = (page.module(e.source), page.module(e.target)) else {
            return Err(SseqError::WindowInsufficient(format!(
                "d_{r}: {} -> {} leaves {}",
                e.source, e.target, page.window
            )));
        };
        let m = matrix_of(e, src, tgt)?;
        if outgoing.insert(e.source, (e.target, m)).is_some() {
            return Err(SseqError::Script(format!("two d_{r} entries out of {}", e.source)));
        }
        incoming.insert(e.target, e.source);
    }
    for (a, (b, m1)) in &outgoing {
        if let Some((c, m2)) = outgoing.get(b) {
            let tgt = page.module(*c).expect("validated");
            let comp = tgt.compose(m1, m2)?;
            if (0..comp.rows()).any(|i| comp.row(i).iter().any(|&x| x != 0)) {
                return Err(SseqError::DSquaredNonzero { page: r, middle: *b });
            }
            let _ = a;
        }
    }
    let zero = MarkedModule::zero(page.p, page.precision);
    let mut next = page.clone();
    next.r = r + 1;
    for (b, entry) in &page.entries {
        let out = outgoing.get(b);
        let inn = incoming.get(b);
        if out.is_none() && inn.is_none() {
            continue;
        }
        let mid = &entry.module;
        let (m2, h) = match out {
            Some((c, m)) => (page.module(*c).expect("validated"), m.clone()),
            None => (&zero, IntMatrix::zeros(mid.len(), 0)),
        };
        let (m0, f) = match inn {
            Some(a) => (page.module(*a).expect("validated"), outgoing[a].1.clone()),
            None => (&zero, IntMatrix::zeros(0, mid.len())),
        };
        let hom = Homology::compute(m0, &f, mid, &h, m2)?;
        let mut steps = entry.steps.clone();
        let module = hom.module().clone();
        steps.push(Step::Subquotient(hom));
        next.entries.insert(*b, Entry { module, steps });
    }
    Ok(next)
}
