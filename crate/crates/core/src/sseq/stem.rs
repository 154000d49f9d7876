use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::factor;
use crate::fgab::local::{GenOrder, MarkedModule};
use crate::fgab::{assemble_extension, cokernel, smith_normal_form, Elementary, ExtensionClass, FgModule, IntMatrix};
use crate::sseq::{turn_page, Bidegree, DifferentialScript, Provenance, Result, SseqError, SseqPage};

/// `E_2^{s,t} = 0` for `s >= s_min` and `t_min <= t <= t_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroRegion {
    pub s_min: usize,
    pub t_min: i64,
    pub t_max: Option<i64>,
    pub source: String,
}

impl ZeroRegion {
    fn covers(&self, b: Bidegree) -> bool {
        b.s >= self.s_min && b.t >= self.t_min && self.t_max.map_or(true, |m| b.t <= m)
    }
}

/// Classes that are permanent cycles from `from_page` on.
///
/// Applies to a whole stem, a single bidegree, or both restrictions at once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permanence {
    pub stem: Option<i64>,
    pub at: Option<Bidegree>,
    pub from_page: usize,
    pub source: String,
}

impl Permanence {
    fn covers(&self, b: Bidegree, r: usize) -> bool {
        r >= self.from_page && self.stem.map_or(true, |k| b.stem() == k) && self.at.map_or(true, |a| a == b)
    }
}

/// `E_infinity` of `stem` vanishes in filtration above `above`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vanishing {
    pub stem: i64,
    pub above: usize,
    pub source: String,
}

/// Facts about the spectral sequence taken as input rather than computed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Declarations {
    /// `E_2^{s,t} = 0` for `t` below this.
    pub zero_below_t: Option<i64>,
    /// `E_2^{s,t} = 0` for `s` above this.
    pub cd: Option<usize>,
    #[serde(default)]
    pub zero_regions: Vec<ZeroRegion>,
    #[serde(default)]
    pub permanent: Vec<Permanence>,
    #[serde(default)]
    pub vanishing: Vec<Vanishing>,
}

impl Declarations {
    fn e2_zero(&self, b: Bidegree) -> bool {
        self.zero_below_t.map_or(false, |z| b.t < z)
            || self.cd.map_or(false, |c| b.s > c)
            || self.zero_regions.iter().any(|z| z.covers(b))
    }

    /// `E_2` vanishes at `(s + j, t + j)` for every `j >= 0`.
    fn e2_zero_along(&self, b: Bidegree) -> bool {
        self.cd.map_or(false, |c| b.s > c)
            || self.zero_regions.iter().any(|z| z.t_max.is_none() && z.s_min <= b.s && z.t_min <= b.t)
    }

    fn permanent(&self, b: Bidegree, r: usize) -> bool {
        self.permanent.iter().any(|p| p.covers(b, r))
    }

    fn permanent_from(&self, b: Bidegree) -> Option<usize> {
        self.permanent.iter().filter(|p| p.covers(b, usize::MAX)).map(|p| p.from_page).min()
    }

    fn vanishes(&self, b: Bidegree) -> bool {
        self.vanishing.iter().any(|v| v.stem == b.stem() && b.s > v.above)
    }

    /// Sources cited by the declarations, in order.
    pub fn sources(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        out.extend(self.zero_regions.iter().map(|z| z.source.clone()));
        out.extend(self.permanent.iter().map(|p| p.source.clone()));
        out.extend(self.vanishing.iter().map(|v| v.source.clone()));
        out
    }
}

/// `E_2` and every later page up to the last scripted one.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pages: Vec<SseqPage>,
    script: DifferentialScript,
    decl: Declarations,
}

impl SpectralSequence {
    pub fn run(e2: SseqPage, script: DifferentialScript, decl: Declarations) -> Result<Self> {
        if e2.r() != 2 {
            return Err(SseqError::Script(format!("spectral sequence starts on page {}", e2.r())));
        }
        for (b, entry) in e2.entries() {
            if decl.e2_zero(b) && !entry.is_zero() {
                return Err(SseqError::Script(format!("declared zero region contains nonzero E_2 at {b}")));
            }
        }
        for e in &script.entries {
            let Some(from) = decl.permanent_from(e.source) else { continue };
            if e.page >= from && e.matrix.iter().flatten().any(|&x| x != 0) {
                let nonzero = match e2.module(e.target) {
                    Some(tgt) => {
                        let m = IntMatrix::from_rows(tgt.len(), e.matrix.clone())?;
                        let m = tgt.reduce_matrix(&m);
                        (0..m.rows()).any(|i| m.row(i).iter().any(|&x| x != 0))
                    }
                    None => true,
                };
                if nonzero {
                    return Err(SseqError::Script(format!(
                        "d_{} out of {} contradicts declared permanence",
                        e.page, e.source
                    )));
                }
            }
        }
        let mut pages = vec![e2];
        for _ in 2..=script.max_page() {
            let next = turn_page(pages.last().expect("nonempty"), &script)?;
            pages.push(next);
        }
        Ok(SpectralSequence { pages, script, decl })
    }

    pub fn pages(&self) -> &[SseqPage] {
        &self.pages
    }

    /// The `E_r` page, for `2 <= r <=` the last computed page.
    pub fn page(&self, r: usize) -> Option<&SseqPage> {
        r.checked_sub(2).and_then(|i| self.pages.get(i))
    }

    pub fn final_page(&self) -> &SseqPage {
        self.pages.last().expect("nonempty")
    }

    pub fn script(&self) -> &DifferentialScript {
        &self.script
    }

    pub fn declarations(&self) -> &Declarations {
        &self.decl
    }

    /// Renames generators on the last page.
    pub fn rebase_final(&mut self, b: Bidegree, gens: &[(String, Vec<i128>)]) -> Result<()> {
        self.pages.last_mut().expect("nonempty").rebase(b, gens)
    }

    fn zero_on(&self, r: usize, b: Bidegree) -> Option<bool> {
        let page = self.page(r.min(self.final_page().r()))?;
        page.entry(b).map(|e| e.is_zero())
    }

    /// Justifies `d_r: a -> b`, or reports why it cannot be.
    fn check_differential(&self, r: usize, a: Bidegree, b: Bidegree) -> Result<()> {
        let window = self.final_page().window();
        if self.decl.permanent(a, r) || self.decl.e2_zero(a) || self.decl.e2_zero(b) {
            return Ok(());
        }
        if r < self.final_page().r() && self.script.find(r, a).is_some() {
            return Ok(());
        }
        match (self.zero_on(r, a), self.zero_on(r, b)) {
            (Some(true), _) | (_, Some(true)) => Ok(()),
            (Some(false), Some(false)) => Err(SseqError::Unresolved { page: r, from: a, to: b }),
            _ => Err(SseqError::WindowInsufficient(format!("d_{r}: {a} -> {b} leaves {window}"))),
        }
    }

    /// The nonzero `E_infinity` pieces of a stem, by increasing filtration.
    pub fn read_stem(&self, k: i64) -> Result<Vec<StemPiece>> {
        let fin = self.final_page();
        let window = fin.window();
        let mut pieces = Vec::new();
        let mut s = 0usize;
        loop {
            let b = Bidegree::new(s, k + s as i64);
            if !window.contains(b) {
                if self.decl.e2_zero(b) || self.decl.vanishes(b) {
                    if b.t > window.t_max || s > window.s_max {
                        let along = self.decl.e2_zero_along(b)
                            || self.decl.vanishing.iter().any(|v| v.stem == k && v.above < s);
                        if along {
                            break;
                        }
                    }
                    s += 1;
                    continue;
                }
                if b.t < window.t_min {
                    return Err(SseqError::WindowInsufficient(format!("stem {k} at {b} is below {window}")));
                }
                return Err(SseqError::WindowInsufficient(format!("stem {k} continues past {window} at {b}")));
            }
            s += 1;
            let entry = fin.entry(b).expect("in window");
            if entry.is_zero() || self.decl.vanishes(b) {
                continue;
            }
            self.justify_piece(b)?;
            pieces.push(StemPiece {
                at: b,
                module: entry.module().clone(),
                structure: entry.module().structure()?,
            });
        }
        Ok(pieces)
    }

    fn justify_piece(&self, b: Bidegree) -> Result<()> {
        let window = self.final_page().window();
        // Outgoing.
        let mut r = 2;
        loop {
            let c = b.target(r);
            if !window.contains(c) && c.s > window.s_max {
                let tail = self.decl.permanent_from(b).map_or(false, |f| f <= r) || self.decl.e2_zero_along(c);
                if !tail {
                    return Err(SseqError::WindowInsufficient(format!(
                        "differentials out of {b} reach past {window} at page {r}"
                    )));
                }
                break;
            }
            self.check_differential(r, b, c)?;
            r += 1;
        }
        // Incoming.
        for r in 2..=b.s {
            let a = b.source(r).expect("r <= s");
            self.check_differential(r, a, b)?;
        }
        Ok(())
    }
}

/// One associated graded piece of a stem.
#[derive(Clone, Debug)]
pub struct StemPiece {
    pub at: Bidegree,
    pub module: MarkedModule,
    pub structure: FgModule,
}

/// `order * source = sum c * target` in the abutment, with targets in higher filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionRelation {
    pub source: String,
    pub target: Vec<(String, i64)>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct StemAssembly {
    pub stem: i64,
    pub pieces: Vec<StemPiece>,
    pub relations: Vec<ExtensionRelation>,
    /// `F^s` for each piece, from the top filtration down.
    pub filtration: Vec<FgModule>,
    pub total: FgModule,
    /// Generator labels of all pieces, lowest filtration first.
    pub generators: Vec<String>,
    /// Relations among `generators` presenting `total`.
    pub presentation: Vec<Vec<i128>>,
}

impl StemAssembly {
    /// The assembly of a stem with no pieces.
    pub fn empty(stem: i64, p: u64, precision: u32) -> Self {
        StemAssembly {
            stem,
            pieces: Vec::new(),
            relations: Vec::new(),
            filtration: Vec::new(),
            total: FgModule::zero(p, precision),
            generators: Vec::new(),
            presentation: Vec::new(),
        }
    }

    fn quotient_by(&self, extra: Vec<Vec<i128>>) -> Result<FgModule> {
        let n = self.generators.len();
        let mut rows = self.presentation.clone();
        rows.extend(extra);
        let pres = IntMatrix::from_rows(n, rows)?;
        Ok(cokernel(n, &pres, self.total.p(), self.total.precision())?)
    }

    fn unit(&self, label: &str) -> Result<Vec<i128>> {
        let i = self
            .generators
            .iter()
            .position(|g| g == label)
            .ok_or_else(|| SseqError::InvalidClass(format!("unknown class {label}")))?;
        let mut v = vec![0i128; self.generators.len()];
        v[i] = 1;
        Ok(v)
    }

    /// Order of a generator in the abutment, `None` if infinite.
    pub fn order_of(&self, label: &str) -> Result<Option<u128>> {
        let q = self.quotient_by(vec![self.unit(label)?])?;
        if q.free_rank() != self.total.free_rank() {
            return Ok(None);
        }
        Ok(Some(self.total.torsion_order() / q.torsion_order()))
    }

    /// Whether the named generators generate the abutment.
    pub fn generated_by(&self, labels: &[&str]) -> Result<bool> {
        let rows = labels.iter().map(|l| self.unit(l)).collect::<Result<Vec<_>>>()?;
        Ok(self.quotient_by(rows)?.is_zero())
    }
}

struct Gen {
    piece: usize,
    order: GenOrder,
    label: String,
}

/// Resolves the filtration of a stem into a single group.
pub fn assemble_stem(stem: i64, pieces: Vec<StemPiece>, relations: Vec<ExtensionRelation>) -> Result<StemAssembly> {
    let Some(first) = pieces.first() else {
        return Err(SseqError::InvalidClass(format!("stem {stem} has no pieces")));
    };
    let p = first.module.p();
    let precision = pieces.iter().map(|x| x.module.precision()).min().expect("nonempty");
    for w in pieces.windows(2) {
        if w[0].at.s >= w[1].at.s || w[0].at.stem() != stem || w[1].at.stem() != stem {
            return Err(SseqError::InvalidClass(format!("pieces of stem {stem} are not ordered by filtration")));
        }
    }
    let mut gens: Vec<Gen> = Vec::new();
    for (i, pc) in pieces.iter().enumerate() {
        for (order, label) in pc.module.orders().iter().zip(pc.module.labels()) {
            if gens.iter().any(|g| &g.label == label) {
                return Err(SseqError::InvalidClass(format!("label {label} appears twice")));
            }
            gens.push(Gen { piece: i, order: *order, label: label.clone() });
        }
    }
    let index = |l: &str| gens.iter().position(|g| g.label == l);
    let mut rel_rows: BTreeMap<usize, Vec<i128>> = BTreeMap::new();
    for rel in &relations {
        let gi = index(&rel.source).ok_or_else(|| SseqError::InvalidClass(format!("unknown class {}", rel.source)))?;
        let GenOrder::Finite(n) = gens[gi].order else {
            return Err(SseqError::InvalidClass(format!("{} has infinite order", rel.source)));
        };
        let mut row = vec![0i128; gens.len()];
        row[gi] = n as i128;
        for (l, c) in &rel.target {
            let ti = index(l).ok_or_else(|| SseqError::InvalidClass(format!("unknown class {l}")))?;
            if gens[ti].piece <= gens[gi].piece {
                return Err(SseqError::InvalidClass(format!("{l} is not in higher filtration than {}", rel.source)));
            }
            row[ti] -= *c as i128;
        }
        if rel_rows.insert(gi, row).is_some() {
            return Err(SseqError::InvalidClass(format!("two relations for {}", rel.source)));
        }
    }
    for (gi, g) in gens.iter().enumerate() {
        if let GenOrder::Finite(n) = g.order {
            rel_rows.entry(gi).or_insert_with(|| {
                let mut row = vec![0i128; gens.len()];
                row[gi] = n as i128;
                row
            });
        }
    }
    let mut filtration = Vec::new();
    let mut sub = FgModule::zero(p, precision);
    for level in (0..pieces.len()).rev() {
        let start = gens.iter().position(|g| g.piece == level).unwrap_or(gens.len());
        let width = gens.len() - start;
        let rows: Vec<Vec<i128>> =
            rel_rows.iter().filter(|(gi, _)| **gi >= start).map(|(_, r)| r[start..].to_vec()).collect();
        let pres = IntMatrix::from_rows(width, rows)?;
        let direct = cokernel(width, &pres, p, precision)?;
        let quot = &pieces[level].structure;
        let via_ext = if level + 1 == pieces.len() {
            quot.clone()
        } else {
            let class = extension_class(&gens, &rel_rows, level, start, &sub, quot, p, precision)?;
            assemble_extension(&class)?
        };
        if direct != via_ext {
            return Err(SseqError::InvalidClass(format!(
                "filtration {}: presentation gives {direct}, extension gives {via_ext}",
                pieces[level].at.s
            )));
        }
        let expect_free = sub.free_rank() + quot.free_rank();
        let finite = sub.is_finite() && quot.is_finite();
        if direct.free_rank() != expect_free || (finite && direct.order() != Some(sub.torsion_order() * quot.torsion_order())) {
            return Err(SseqError::InvalidClass(format!(
                "filtration {}: order of {direct} is not the product of {sub} and {quot}",
                pieces[level].at.s
            )));
        }
        filtration.push(direct.clone());
        sub = direct;
    }
    let generators = gens.iter().map(|g| g.label.clone()).collect();
    let presentation = rel_rows.into_values().collect();
    Ok(StemAssembly { stem, pieces, relations, filtration, total: sub, generators, presentation })
}

/// The class of `0 -> F^{>s} -> F^s -> E^s -> 0` in elementary coordinates.
#[allow(clippy::too_many_arguments)]
fn extension_class(
    gens: &[Gen],
    rel_rows: &BTreeMap<usize, Vec<i128>>,
    level: usize,
    start: usize,
    sub: &FgModule,
    quot: &FgModule,
    p: u64,
    precision: u32,
) -> Result<ExtensionClass> {
    let sub_start = gens.iter().position(|g| g.piece > level).unwrap_or(gens.len());
    let width = gens.len() - sub_start;
    let rows: Vec<Vec<i128>> =
        rel_rows.iter().filter(|(gi, _)| **gi >= sub_start).map(|(_, r)| r[sub_start..].to_vec()).collect();
    let pres = IntMatrix::from_rows(width, rows)?;
    let snf = smith_normal_form(&pres)?;
    let diag = snf.d.diagonal();
    // Elementary coordinates of the sub: (kind, SNF column, modulus).
    let mut coords: Vec<(Elementary, usize, u128)> = Vec::new();
    for j in 0..width {
        let d = diag.get(j).copied().unwrap_or(0).unsigned_abs();
        if d == 0 {
            coords.push((Elementary::Free, j, 0));
        } else {
            for (q, e) in factor(d) {
                let m = (q as u128).pow(e);
                coords.push((Elementary::Power { prime: q, exp: e }, j, m));
            }
        }
    }
    coords.sort_by_key(|c| c.0);
    if coords.iter().map(|c| c.0).collect::<Vec<_>>() != sub.elementary() {
        return Err(SseqError::InvalidClass("sub presentation disagrees with its structure".into()));
    }
    // Elementary torsion generators of the quotient: (kind, generator, multiplier).
    let mut quot_gens: Vec<(Elementary, usize)> = Vec::new();
    for (gi, g) in gens.iter().enumerate().take(sub_start).skip(start) {
        if let GenOrder::Finite(n) = g.order {
            for (q, e) in factor(n) {
                quot_gens.push((Elementary::Power { prime: q, exp: e }, gi));
            }
        }
    }
    quot_gens.sort_by_key(|c| c.0);
    let quot_t: Vec<Elementary> = quot.elementary().into_iter().filter(|e| *e != Elementary::Free).collect();
    if quot_gens.iter().map(|c| c.0).collect::<Vec<_>>() != quot_t {
        return Err(SseqError::InvalidClass("piece generators disagree with its structure".into()));
    }
    let mut value = Vec::new();
    for (kind, gi) in &quot_gens {
        // qa * (n/qa) g = n g, read off the relation row.
        let img: Vec<i128> = rel_rows[gi][sub_start..].iter().map(|&x| -x).collect();
        let row = IntMatrix::from_rows(width, vec![img])?;
        let y = row.checked_mul(&snf.v)?;
        let mut out = Vec::new();
        for (sk, j, m) in &coords {
            let range = match (*kind, *sk) {
                (Elementary::Power { prime: a, exp: ea }, Elementary::Free) if a == p => (a as u128).pow(ea),
                (Elementary::Power { prime: a, exp: ea }, Elementary::Power { prime: b, exp: eb }) if a == b => {
                    (a as u128).pow(ea.min(eb))
                }
                _ => 1,
            };
            let v = y.get(0, *j);
            let reduced = if *m == 0 { v } else { v.rem_euclid(*m as i128) };
            out.push(reduced.rem_euclid(range as i128) as u128);
        }
        value.push(out);
    }
    let sub = sub.clone().with_precision(precision);
    Ok(ExtensionClass::new(sub, quot.clone(), value)?)
}
