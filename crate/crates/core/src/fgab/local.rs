//! Linear algebra over `Z_l` at finite precision, and homology of complexes of
//! marked modules split into primary components.

use crate::arith::{addmod, checked_pow, factor, invmod, mulmod, reduce_signed, submod};
use crate::fgab::matrix::IntMatrix;
use crate::fgab::module::FgModule;
use crate::fgab::FgabError;

/// Bits available for free (p-adic) coordinates.
const FREE_BITS: u32 = 120;

/// Largest exponent `k` with `p^k < 2^FREE_BITS`.
pub fn free_cap(p: u64) -> u32 {
    let mut k = 0;
    let mut acc: u128 = 1;
    while let Some(next) = acc.checked_mul(p as u128) {
        if next >= 1u128 << FREE_BITS {
            break;
        }
        acc = next;
        k += 1;
    }
    k
}

/// Modulus carried by free coordinates.
pub fn free_modulus(p: u64) -> u128 {
    checked_pow(p, free_cap(p)).expect("cap fits")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenOrder {
    Free,
    Finite(u128),
}

/// A module presented as a list of cyclic generators with labels.
///
/// Elements are integer row vectors; homomorphisms are integer matrices acting
/// on the right (`x -> x * F`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedModule {
    p: u64,
    precision: u32,
    orders: Vec<GenOrder>,
    labels: Vec<String>,
}

impl MarkedModule {
    pub fn new(p: u64, precision: u32, orders: Vec<GenOrder>, labels: Vec<String>) -> Result<Self, FgabError> {
        if orders.len() != labels.len() {
            return Err(FgabError::Dimension(format!("{} orders, {} labels", orders.len(), labels.len())));
        }
        if orders.iter().any(|o| *o == GenOrder::Finite(0)) {
            return Err(FgabError::InvalidModule("generator of order 0".into()));
        }
        Ok(MarkedModule { p, precision, orders, labels })
    }

    /// Generators `g0, g1, ...` with the given orders.
    pub fn unlabelled(p: u64, precision: u32, orders: Vec<GenOrder>) -> Self {
        let labels = (0..orders.len()).map(|i| format!("g{i}")).collect();
        MarkedModule { p, precision, orders, labels }
    }

    pub fn zero(p: u64, precision: u32) -> Self {
        MarkedModule { p, precision, orders: Vec::new(), labels: Vec::new() }
    }

    /// Marked version of a canonical module, one generator per invariant factor.
    pub fn from_fg(m: &FgModule) -> Self {
        let mut orders = vec![GenOrder::Free; m.free_rank()];
        orders.extend(m.torsion().iter().rev().map(|&d| GenOrder::Finite(d)));
        Self::unlabelled(m.p(), m.precision(), orders)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[GenOrder] {
        &self.orders
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relabel(mut self, labels: Vec<String>) -> Result<Self, FgabError> {
        if labels.len() != self.orders.len() {
            return Err(FgabError::Dimension("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Canonical isomorphism type.
    pub fn structure(&self) -> Result<FgModule, FgabError> {
        let free = self.orders.iter().filter(|o| **o == GenOrder::Free).count();
        let finite = self.orders.iter().filter_map(|o| match o {
            GenOrder::Finite(n) => Some(*n),
            GenOrder::Free => None,
        });
        FgModule::new(self.p, self.precision, free, finite)
    }

    /// Modulus of coordinate `j`.
    pub fn modulus(&self, j: usize) -> u128 {
        match self.orders[j] {
            GenOrder::Free => free_modulus(self.p),
            GenOrder::Finite(n) => n,
        }
    }

    /// Reduce every coordinate into `[0, modulus)`.
    pub fn reduce(&self, x: &[i128]) -> Vec<i128> {
        x.iter().enumerate().map(|(j, &v)| reduce_signed(v, self.modulus(j)) as i128).collect()
    }

    pub fn is_zero_element(&self, x: &[i128]) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }

    /// Direct sum of `self` with `other`.
    pub fn direct_sum(&self, other: &MarkedModule) -> Result<MarkedModule, FgabError> {
        if self.p != other.p {
            return Err(FgabError::InvalidModule("different primes".into()));
        }
        let mut orders = self.orders.clone();
        orders.extend(other.orders.iter().copied());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Ok(MarkedModule { p: self.p, precision: self.precision.min(other.precision), orders, labels })
    }

    /// Sum of `copies.len()` copies, labelled `prefix[label]`.
    pub fn copies(&self, prefixes: &[String]) -> MarkedModule {
        let mut orders = Vec::new();
        let mut labels = Vec::new();
        for pre in prefixes {
            orders.extend(self.orders.iter().copied());
            labels.extend(self.labels.iter().map(|l| format!("{pre}[{l}]")));
        }
        MarkedModule { p: self.p, precision: self.precision, orders, labels }
    }

    fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self
            .orders
            .iter()
            .flat_map(|o| match o {
                GenOrder::Free => vec![self.p],
                GenOrder::Finite(n) => factor(*n).into_iter().map(|(q, _)| q).collect(),
            })
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    fn max_exponent(&self, ell: u64) -> u32 {
        self.orders
            .iter()
            .filter_map(|o| match o {
                GenOrder::Finite(n) => crate::arith::valuation(*n, ell),
                GenOrder::Free => None,
            })
            .max()
            .unwrap_or(0)
    }

    fn has_free(&self) -> bool {
        self.orders.contains(&GenOrder::Free)
    }

    /// Checks that `f` defines a continuous homomorphism `self -> target`.
    pub fn check_hom(&self, target: &MarkedModule, f: &IntMatrix<i128>) -> Result<(), FgabError> {
        if f.rows() != self.len() || f.cols() != target.len() {
            return Err(FgabError::Dimension(format!(
                "map is {}x{}, modules have {} and {} generators",
                f.rows(),
                f.cols(),
                self.len(),
                target.len()
            )));
        }
        for i in 0..self.len() {
            for j in 0..target.len() {
                let x = f.get(i, j);
                match (self.orders[i], target.orders[j]) {
                    (GenOrder::Finite(n), GenOrder::Finite(m)) => {
                        if mulmod(reduce_signed(x, m), n % m, m) != 0 {
                            return Err(FgabError::InvalidModule(format!(
                                "generator {i} of order {n} cannot map to {x} in Z/{m}"
                            )));
                        }
                    }
                    (GenOrder::Finite(_), GenOrder::Free) => {
                        if x != 0 {
                            return Err(FgabError::InvalidModule(format!("torsion generator {i} maps to free part")));
                        }
                    }
                    (GenOrder::Free, GenOrder::Finite(m)) => {
                        let (_, rest) = crate::arith::split_p_part(m, self.p);
                        if reduce_signed(x, rest) != 0 {
                            return Err(FgabError::Discontinuous(format!(
                                "free generator {i} maps to {x} with prime-to-{} order in Z/{m}",
                                self.p
                            )));
                        }
                    }
                    (GenOrder::Free, GenOrder::Free) => {}
                }
            }
        }
        Ok(())
    }

    /// Matrix product `a * b` for `a: X -> Y`, `b: Y -> self`, reduced in `self`.
    pub fn compose(&self, a: &IntMatrix<i128>, b: &IntMatrix<i128>) -> Result<IntMatrix<i128>, FgabError> {
        if a.cols() != b.rows() || b.cols() != self.len() {
            return Err(FgabError::Dimension("compose".into()));
        }
        let mut out = IntMatrix::zeros(a.rows(), b.cols());
        for j in 0..b.cols() {
            let m = self.modulus(j);
            for i in 0..a.rows() {
                let mut acc = 0u128;
                for k in 0..a.cols() {
                    let x = a.get(i, k);
                    if x == 0 {
                        continue;
                    }
                    let y = b.get(k, j);
                    acc = addmod(acc, mulmod(reduce_signed(x, m), reduce_signed(y, m), m), m);
                }
                out.set(i, j, acc as i128);
            }
        }
        Ok(out)
    }

    /// Image of the element `x` under `f: self -> target`, reduced in `target`.
    pub fn apply(&self, target: &MarkedModule, x: &[i128], f: &IntMatrix<i128>) -> Result<Vec<i128>, FgabError> {
        let row = IntMatrix::from_rows(x.len(), vec![x.to_vec()])?;
        Ok(target.compose(&row, f)?.row(0).to_vec())
    }

    /// Reduce the columns of a map into `self`.
    pub fn reduce_matrix(&self, f: &IntMatrix<i128>) -> IntMatrix<i128> {
        let mut out = f.clone();
        for i in 0..f.rows() {
            for j in 0..f.cols() {
                out.set(i, j, reduce_signed(f.get(i, j), self.modulus(j)) as i128);
            }
        }
        out
    }

    /// `a + b` for maps into `self`.
    pub fn add_matrices(&self, a: &IntMatrix<i128>, b: &IntMatrix<i128>) -> IntMatrix<i128> {
        self.combine(a, b, false)
    }

    /// `a - b` for maps into `self`.
    pub fn sub_matrices(&self, a: &IntMatrix<i128>, b: &IntMatrix<i128>) -> IntMatrix<i128> {
        self.combine(a, b, true)
    }

    fn combine(&self, a: &IntMatrix<i128>, b: &IntMatrix<i128>, minus: bool) -> IntMatrix<i128> {
        let mut out = IntMatrix::zeros(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let m = self.modulus(j);
                let x = reduce_signed(a.get(i, j), m);
                let y = reduce_signed(b.get(i, j), m);
                let v = if minus { submod(x, y, m) } else { addmod(x, y, m) };
                out.set(i, j, v as i128);
            }
        }
        out
    }

    /// `c * a` for a map into `self`.
    pub fn scale_matrix(&self, a: &IntMatrix<i128>, c: i128) -> IntMatrix<i128> {
        let mut out = IntMatrix::zeros(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let m = self.modulus(j);
                out.set(i, j, mulmod(reduce_signed(a.get(i, j), m), reduce_signed(c, m), m) as i128);
            }
        }
        out
    }

    /// Identity endomorphism.
    pub fn identity(&self) -> IntMatrix<i128> {
        IntMatrix::identity(self.len())
    }

    fn component(&self, ell: u64) -> Component {
        let mut idx = Vec::new();
        let mut scale = Vec::new();
        let mut exp = Vec::new();
        for (i, o) in self.orders.iter().enumerate() {
            match *o {
                GenOrder::Free if ell == self.p => {
                    idx.push(i);
                    scale.push(1);
                    exp.push(None);
                }
                GenOrder::Finite(n) => {
                    let a = crate::arith::valuation(n, ell).unwrap_or(0);
                    if a > 0 {
                        let la = (ell as u128).pow(a);
                        idx.push(i);
                        scale.push(n / la);
                        exp.push(Some(a));
                    }
                }
                GenOrder::Free => {}
            }
        }
        Component { ell, idx, scale, exp }
    }
}

/// The `l`-primary summand of a marked module, as a module in its own right.
#[derive(Clone, Debug)]
pub struct Primary {
    pub ell: u64,
    pub module: MarkedModule,
    comp: Component,
}

impl Primary {
    /// Coordinates of a global element in the summand.
    pub fn project(&self, global: &MarkedModule, x: &[i128]) -> Vec<i128> {
        let q = free_modulus(global.p);
        self.comp.project(global, x, q).into_iter().map(|v| v as i128).collect()
    }

    /// Global element represented by summand coordinates.
    pub fn embed(&self, global: &MarkedModule, y: &[i128]) -> Vec<i128> {
        let mut out = vec![0i128; global.len()];
        let yy: Vec<u128> =
            y.iter().enumerate().map(|(k, &v)| reduce_signed(v, self.module.modulus(k))).collect();
        self.comp.embed_into(global, &yy, &mut out);
        out
    }

    /// Restriction of an endomorphism of `global` to the summand.
    pub fn restrict(&self, global: &MarkedModule, f: &IntMatrix<i128>) -> Result<IntMatrix<i128>, FgabError> {
        global.check_hom(global, f)?;
        let q = free_modulus(global.p);
        let rows = self.comp.local_map(global, &self.comp, global, f, q);
        let rows = rows.into_iter().map(|r| r.into_iter().map(|v| v as i128).collect()).collect();
        IntMatrix::from_rows(self.comp.len(), rows)
    }
}

impl MarkedModule {
    /// Primary decomposition, one summand per prime (the free part goes with `p`).
    pub fn primary_parts(&self) -> Vec<Primary> {
        self.primes()
            .into_iter()
            .map(|ell| {
                let comp = self.component(ell);
                let orders = comp
                    .exp
                    .iter()
                    .map(|e| match e {
                        None => GenOrder::Free,
                        Some(a) => GenOrder::Finite((ell as u128).pow(*a)),
                    })
                    .collect();
                let labels = comp.idx.iter().map(|&i| self.labels[i].clone()).collect();
                let module = MarkedModule { p: self.p, precision: self.precision, orders, labels };
                Primary { ell, module, comp }
            })
            .collect()
    }
}

/// The `l`-primary component of a marked module.
#[derive(Clone, Debug)]
struct Component {
    ell: u64,
    idx: Vec<usize>,
    scale: Vec<u128>,
    exp: Vec<Option<u32>>,
}

impl Component {
    fn len(&self) -> usize {
        self.idx.len()
    }

    /// Local coordinates of a global element, modulo `l^w`.
    fn project(&self, module: &MarkedModule, x: &[i128], q: u128) -> Vec<u128> {
        self.idx
            .iter()
            .enumerate()
            .map(|(k, &i)| match self.exp[k] {
                None => reduce_signed(x[i], q),
                Some(a) => {
                    let la = (self.ell as u128).pow(a);
                    let n = module.modulus(i);
                    let r = reduce_signed(x[i], n) % la;
                    let inv = invmod(self.scale[k] % la, la).expect("cofactor is a unit");
                    mulmod(r, inv, la)
                }
            })
            .collect()
    }

    /// Add the global element represented by local coordinates `y` into `out`.
    fn embed_into(&self, module: &MarkedModule, y: &[u128], out: &mut [i128]) {
        for (k, &i) in self.idx.iter().enumerate() {
            let m = module.modulus(i);
            let add = match self.exp[k] {
                None => y[k] % m,
                Some(_) => mulmod(y[k], self.scale[k], m),
            };
            out[i] = addmod(reduce_signed(out[i], m), add, m) as i128;
        }
    }

    /// Relation rows `l^a e_k` of the torsion generators.
    fn relations(&self, q: u128) -> Vec<Vec<u128>> {
        let n = self.len();
        self.exp
            .iter()
            .enumerate()
            .filter_map(|(k, e)| {
                e.map(|a| {
                    let mut r = vec![0u128; n];
                    r[k] = (self.ell as u128).pow(a) % q;
                    r
                })
            })
            .collect()
    }

    /// Local matrix of a global homomorphism `src -> tgt`.
    fn local_map(
        &self,
        src: &MarkedModule,
        tgt_comp: &Component,
        tgt: &MarkedModule,
        f: &IntMatrix<i128>,
        q: u128,
    ) -> Vec<Vec<u128>> {
        self.idx
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let scaled: Vec<i128> = (0..tgt.len())
                    .map(|j| {
                        let m = tgt.modulus(j);
                        mulmod(reduce_signed(f.get(i, j), m), self.scale[k] % m, m) as i128
                    })
                    .collect();
                let _ = src;
                tgt_comp.project(tgt, &scaled, q)
            })
            .collect()
    }
}

/// Arithmetic in `Z/l^w` with valuations above `threshold` read as zero.
#[derive(Clone, Copy, Debug)]
pub struct LocalRing {
    pub ell: u64,
    pub w: u32,
    pub threshold: u32,
    q: u128,
}

impl LocalRing {
    pub fn new(ell: u64, w: u32, threshold: u32) -> Result<Self, FgabError> {
        let q = checked_pow(ell, w).filter(|q| *q < 1u128 << 126).ok_or(FgabError::PrecisionOverflow {
            order: 0,
            p: ell,
            precision: w,
        })?;
        Ok(LocalRing { ell, w, threshold: threshold.min(w), q })
    }

    pub fn modulus(&self) -> u128 {
        self.q
    }

    /// Valuation, or `None` when at or beyond the threshold.
    pub fn val(&self, x: u128) -> Option<u32> {
        let mut x = x % self.q;
        if x == 0 {
            return None;
        }
        let mut v = 0;
        while x % self.ell as u128 == 0 {
            x /= self.ell as u128;
            v += 1;
        }
        (v < self.threshold).then_some(v)
    }

    fn pow(&self, v: u32) -> u128 {
        (self.ell as u128).pow(v)
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        mulmod(a, b, self.q)
    }

    fn sub(&self, a: u128, b: u128) -> u128 {
        submod(a % self.q, b % self.q, self.q)
    }

    fn add(&self, a: u128, b: u128) -> u128 {
        addmod(a % self.q, b % self.q, self.q)
    }

    fn vec_mat(&self, x: &[u128], m: &[Vec<u128>], cols: usize) -> Vec<u128> {
        let mut out = vec![0u128; cols];
        for (k, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = self.add(*o, self.mul(a, m[k][j]));
            }
        }
        out
    }
}

/// Smith form `P A Q = D` over a local ring, with `D_tt = l^{v_t}`.
#[derive(Clone, Debug)]
struct LocalSnf {
    p: Vec<Vec<u128>>,
    q: Vec<Vec<u128>>,
    q_inv: Vec<Vec<u128>>,
    vals: Vec<u32>,
}

fn identity(n: usize) -> Vec<Vec<u128>> {
    (0..n).map(|i| (0..n).map(|j| u128::from(i == j)).collect()).collect()
}

fn local_snf(ring: &LocalRing, a: &[Vec<u128>], cols: usize) -> LocalSnf {
    let rows = a.len();
    let mut a: Vec<Vec<u128>> = a.iter().map(|r| r.iter().map(|x| x % ring.q).collect()).collect();
    let mut p = identity(rows);
    let mut q = identity(cols);
    let mut q_inv = identity(cols);
    let mut vals = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if let Some(v) = ring.val(x) {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break;
                        }
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(t, pi);
        p.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in q.iter_mut() {
                row.swap(t, pj);
            }
            q_inv.swap(t, pj);
        }
        let lv = ring.pow(v);
        let unit = a[t][t] / lv;
        let inv = invmod(unit, ring.q).expect("pivot unit");
        for x in a[t].iter_mut() {
            *x = ring.mul(*x, inv);
        }
        for x in p[t].iter_mut() {
            *x = ring.mul(*x, inv);
        }
        let pivot_row = a[t].clone();
        let pivot_p = p[t].clone();
        for i in 0..rows {
            if i == t || a[i][t] == 0 {
                continue;
            }
            let f = a[i][t] / lv;
            for j in 0..cols {
                a[i][j] = ring.sub(a[i][j], ring.mul(f, pivot_row[j]));
            }
            for j in 0..rows {
                p[i][j] = ring.sub(p[i][j], ring.mul(f, pivot_p[j]));
            }
        }
        for j in t + 1..cols {
            if a[t][j] == 0 {
                continue;
            }
            let f = a[t][j] / lv;
            for row in a.iter_mut() {
                row[j] = ring.sub(row[j], ring.mul(f, row[t]));
            }
            for row in q.iter_mut() {
                row[j] = ring.sub(row[j], ring.mul(f, row[t]));
            }
            let rj = q_inv[j].clone();
            for (x, y) in q_inv[t].iter_mut().zip(rj) {
                *x = ring.add(*x, ring.mul(f, y));
            }
        }
        vals.push(v);
    }
    LocalSnf { p, q, q_inv, vals }
}

/// Left kernel `{x : x A = 0}` as a list of spanning rows.
fn left_kernel(ring: &LocalRing, a: &[Vec<u128>], cols: usize) -> Vec<Vec<u128>> {
    let snf = local_snf(ring, a, cols);
    snf.p.into_iter().skip(snf.vals.len()).collect()
}

/// A submodule of `Z_l^n` with an adapted basis.
#[derive(Clone, Debug)]
struct Lattice {
    n: usize,
    basis: Vec<Vec<u128>>,
    q: Vec<Vec<u128>>,
    vals: Vec<u32>,
}

impl Lattice {
    fn span(ring: &LocalRing, rows: &[Vec<u128>], n: usize) -> Lattice {
        let snf = local_snf(ring, rows, n);
        let basis = snf
            .vals
            .iter()
            .enumerate()
            .map(|(t, &v)| snf.q_inv[t].iter().map(|&x| ring.mul(x, ring.pow(v))).collect())
            .collect();
        Lattice { n, basis, q: snf.q, vals: snf.vals }
    }

    fn rank(&self) -> usize {
        self.vals.len()
    }

    fn coords(&self, ring: &LocalRing, x: &[u128]) -> Option<Vec<u128>> {
        let z = ring.vec_mat(x, &self.q, self.n);
        for (t, &zt) in z.iter().enumerate().skip(self.rank()) {
            let _ = t;
            if ring.val(zt).is_some() {
                return None;
            }
        }
        self.vals
            .iter()
            .enumerate()
            .map(|(t, &v)| {
                let lv = ring.pow(v);
                (z[t] % lv == 0).then(|| z[t] / lv)
            })
            .collect()
    }
}

/// `(K + R) / (I + R)` for one primary component.
#[derive(Clone, Debug)]
struct LocalHomology {
    ring: LocalRing,
    comp: Component,
    lattice: Lattice,
    /// Change of basis from lattice coordinates to homology coordinates.
    q: Vec<Vec<u128>>,
    /// Indices `t` of nontrivial homology generators, with their orders.
    kept: Vec<(usize, GenOrder)>,
    /// Generators in local coordinates of the middle module.
    gens: Vec<Vec<u128>>,
}

impl LocalHomology {
    fn coords(&self, y: &[u128]) -> Result<Vec<u128>, FgabError> {
        let c = self
            .lattice
            .coords(&self.ring, y)
            .ok_or_else(|| FgabError::Unsolvable("element is not a cycle".into()))?;
        let z = self.ring.vec_mat(&c, &self.q, self.lattice.rank());
        Ok(self
            .kept
            .iter()
            .map(|&(t, o)| match o {
                GenOrder::Finite(n) => z[t] % n,
                GenOrder::Free => z[t],
            })
            .collect())
    }
}

/// Working exponent and threshold for the `l`-component of a complex.
fn ring_for(ell: u64, p: u64, precision: u32, modules: &[&MarkedModule]) -> Result<LocalRing, FgabError> {
    let e = modules.iter().map(|m| m.max_exponent(ell)).max().unwrap_or(0);
    let free = ell == p && modules.iter().any(|m| m.has_free());
    let threshold = if free { (precision + 1).max(e + 1) } else { e + 1 };
    LocalRing::new(ell, threshold + 2 * e + 4, threshold)
}

fn all_primes(modules: &[&MarkedModule]) -> Vec<u64> {
    let mut ps: Vec<u64> = modules.iter().flat_map(|m| m.primes()).collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// Homology of `m0 --f--> m1 --h--> m2` at `m1`, with generators tracked.
#[derive(Clone, Debug)]
pub struct Homology {
    middle: MarkedModule,
    module: MarkedModule,
    gens: Vec<Vec<i128>>,
    parts: Vec<LocalHomology>,
}

impl Homology {
    pub fn compute(
        m0: &MarkedModule,
        f: &IntMatrix<i128>,
        m1: &MarkedModule,
        h: &IntMatrix<i128>,
        m2: &MarkedModule,
    ) -> Result<Homology, FgabError> {
        m0.check_hom(m1, f)?;
        m1.check_hom(m2, h)?;
        let p = m1.p;
        let precision = m1.precision;
        let mods = [m0, m1, m2];
        let mut parts = Vec::new();
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let mut labels = Vec::new();
        for ell in m1.primes() {
            let ring = ring_for(ell, p, precision, &mods)?;
            let q = ring.modulus();
            let c0 = m0.component(ell);
            let c1 = m1.component(ell);
            let c2 = m2.component(ell);
            let g1 = c1.len();
            // Cycles: kernel of [h; relations of m2], projected to m1.
            let mut stacked = c1.local_map(m1, &c2, m2, h, q);
            stacked.extend(c2.relations(q));
            let kernel = left_kernel(&ring, &stacked, c2.len());
            let mut cyc: Vec<Vec<u128>> = kernel.into_iter().map(|r| r[..g1].to_vec()).collect();
            let rel1 = c1.relations(q);
            cyc.extend(rel1.iter().cloned());
            let lattice = Lattice::span(&ring, &cyc, g1);
            // Boundaries plus relations, in lattice coordinates.
            let mut bnd = c0.local_map(m0, &c1, m1, f, q);
            bnd.extend(rel1);
            let coords = bnd
                .iter()
                .map(|b| lattice.coords(&ring, b))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| FgabError::Unsolvable("boundaries are not cycles".into()))?;
            let k = lattice.rank();
            let snf = local_snf(&ring, &coords, k);
            let mut kept = Vec::new();
            let mut local_gens = Vec::new();
            for t in 0..k {
                let order = match snf.vals.get(t) {
                    Some(0) => continue,
                    Some(&v) => GenOrder::Finite(ring.pow(v)),
                    None => {
                        if ell != p {
                            return Err(FgabError::InvalidModule(format!("free part in the {ell}-component")));
                        }
                        GenOrder::Free
                    }
                };
                let g = ring.vec_mat(&snf.q_inv[t], &lattice.basis, g1);
                let mut global = vec![0i128; m1.len()];
                c1.embed_into(m1, &g, &mut global);
                gens.push(global);
                orders.push(order);
                labels.push(cycle_label(m1, &global_support(&c1, &g)));
                kept.push((t, order));
                local_gens.push(g);
            }
            parts.push(LocalHomology { ring, comp: c1, lattice, q: snf.q, kept, gens: local_gens });
        }
        let module = MarkedModule::new(p, precision, orders, labels)?;
        Ok(Homology { middle: m1.clone(), module, gens, parts })
    }

    /// The homology as a marked module; generator `i` is represented by `generator(i)`.
    pub fn module(&self) -> &MarkedModule {
        &self.module
    }

    pub fn structure(&self) -> Result<FgModule, FgabError> {
        self.module.structure()
    }

    pub fn middle(&self) -> &MarkedModule {
        &self.middle
    }

    /// Representing cycle of generator `i`, in coordinates of the middle module.
    pub fn generator(&self, i: usize) -> &[i128] {
        &self.gens[i]
    }

    pub fn generators(&self) -> &[Vec<i128>] {
        &self.gens
    }

    /// Coordinates of the class of a cycle `x`.
    pub fn coords(&self, x: &[i128]) -> Result<Vec<i128>, FgabError> {
        let mut out = Vec::new();
        for part in &self.parts {
            let y = part.comp.project(&self.middle, x, part.ring.modulus());
            out.extend(part.coords(&y)?.into_iter().map(|v| v as i128));
        }
        Ok(out)
    }

    /// Whether the cycle `x` is a boundary.
    pub fn is_boundary(&self, x: &[i128]) -> Result<bool, FgabError> {
        Ok(self.coords(x)?.iter().zip(self.module.orders()).all(|(&c, o)| match o {
            GenOrder::Finite(_) => c == 0,
            GenOrder::Free => part_free_zero(c),
        }))
    }

    /// Matrix of the map induced on homology by `phi: middle -> other.middle`.
    pub fn induced_map(&self, phi: &IntMatrix<i128>, other: &Homology) -> Result<IntMatrix<i128>, FgabError> {
        self.middle.check_hom(&other.middle, phi)?;
        let mut rows = Vec::new();
        for part in &self.parts {
            let target = other.parts.iter().find(|t| t.ring.ell == part.ring.ell);
            for g in &part.gens {
                let mut row = vec![0i128; other.module.len()];
                if let Some(tp) = target {
                    let q = part.ring.modulus().min(tp.ring.modulus());
                    let local = part.comp.local_map(&self.middle, &tp.comp, &other.middle, phi, q);
                    let ring = if part.ring.modulus() <= tp.ring.modulus() { part.ring } else { tp.ring };
                    let img = ring.vec_mat(g, &local, tp.comp.len());
                    let c = tp.coords(&img)?;
                    let offset: usize = other
                        .parts
                        .iter()
                        .take_while(|x| x.ring.ell != part.ring.ell)
                        .map(|x| x.kept.len())
                        .sum();
                    for (k, v) in c.into_iter().enumerate() {
                        row[offset + k] = v as i128;
                    }
                }
                rows.push(row);
            }
        }
        IntMatrix::from_rows(other.module.len(), rows)
    }

    /// Endomorphism of the homology induced by `phi: middle -> middle`.
    pub fn induced(&self, phi: &IntMatrix<i128>) -> Result<IntMatrix<i128>, FgabError> {
        self.induced_map(phi, self)
    }
}

fn part_free_zero(c: i128) -> bool {
    c == 0
}

fn global_support(comp: &Component, g: &[u128]) -> Vec<usize> {
    comp.idx.iter().zip(g).filter(|(_, &v)| v != 0).map(|(&i, _)| i).collect()
}

fn cycle_label(m: &MarkedModule, support: &[usize]) -> String {
    let names: Vec<&str> = support.iter().map(|&i| m.labels[i].as_str()).collect();
    if names.is_empty() {
        "0".into()
    } else {
        names.join("+")
    }
}

/// Kernel of `f: src -> tgt` as a marked submodule with inclusion matrix.
pub fn kernel(src: &MarkedModule, f: &IntMatrix<i128>, tgt: &MarkedModule) -> Result<Homology, FgabError> {
    let zero = MarkedModule::zero(src.p, src.precision);
    Homology::compute(&zero, &IntMatrix::zeros(0, src.len()), src, f, tgt)
}

/// Cokernel of `f: src -> tgt`.
pub fn cokernel_of(src: &MarkedModule, f: &IntMatrix<i128>, tgt: &MarkedModule) -> Result<Homology, FgabError> {
    let zero = MarkedModule::zero(tgt.p, tgt.precision);
    Homology::compute(src, f, tgt, &IntMatrix::zeros(tgt.len(), 0), &zero)
}

/// Solve `x f = v` in `tgt`; returns a preimage in `src` coordinates.
pub fn solve(
    src: &MarkedModule,
    f: &IntMatrix<i128>,
    tgt: &MarkedModule,
    v: &[i128],
) -> Result<Option<Vec<i128>>, FgabError> {
    src.check_hom(tgt, f)?;
    let mut x = vec![0i128; src.len()];
    for ell in all_primes(&[src, tgt]) {
        let ring = ring_for(ell, tgt.p, tgt.precision, &[src, tgt])?;
        let q = ring.modulus();
        let cs = src.component(ell);
        let ct = tgt.component(ell);
        let mut stacked = cs.local_map(src, &ct, tgt, f, q);
        stacked.extend(ct.relations(q));
        let snf = local_snf(&ring, &stacked, ct.len());
        let z = ring.vec_mat(&ct.project(tgt, v, q), &snf.q, ct.len());
        let mut y = vec![0u128; stacked.len()];
        for (t, &zt) in z.iter().enumerate() {
            match snf.vals.get(t) {
                Some(&vt) => {
                    let lv = ring.pow(vt);
                    if zt % lv != 0 {
                        return Ok(None);
                    }
                    y[t] = zt / lv;
                }
                None => {
                    if ring.val(zt).is_some() {
                        return Ok(None);
                    }
                }
            }
        }
        let full = ring.vec_mat(&y, &snf.p, stacked.len());
        cs.embed_into(src, &full[..cs.len()], &mut x);
    }
    Ok(Some(src.reduce(&x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(p: u64, orders: Vec<GenOrder>) -> MarkedModule {
        MarkedModule::unlabelled(p, 16, orders)
    }

    fn mat(cols: usize, rows: Vec<Vec<i128>>) -> IntMatrix<i128> {
        IntMatrix::from_rows(cols, rows).unwrap()
    }

    #[test]
    fn kernel_of_two_on_z2() {
        let z = mm(2, vec![GenOrder::Free]);
        let k = kernel(&z, &mat(1, vec![vec![2]]), &z).unwrap();
        assert!(k.structure().unwrap().is_zero());
        let c = cokernel_of(&z, &mat(1, vec![vec![2]]), &z).unwrap();
        assert_eq!(c.structure().unwrap().to_string(), "Z/2");
    }

    #[test]
    fn mixed_cokernel() {
        // Z_3^x = Z/2 + Z_3 with sigma = 4^3 on the free part.
        let m = mm(3, vec![GenOrder::Finite(2), GenOrder::Free]);
        let s = mat(2, vec![vec![0, 0], vec![0, 63]]);
        let c = cokernel_of(&m, &s, &m).unwrap();
        assert_eq!(c.structure().unwrap().to_string(), "Z/18");
    }

    #[test]
    fn free_kernel_detected() {
        let m = mm(2, vec![GenOrder::Free, GenOrder::Finite(2)]);
        let k = kernel(&m, &mat(2, vec![vec![0, 0], vec![0, 0]]), &m).unwrap();
        assert_eq!(k.structure().unwrap().to_string(), "Z_2 + Z/2");
    }

    #[test]
    fn discontinuous_map_rejected() {
        let a = mm(3, vec![GenOrder::Free]);
        let b = mm(3, vec![GenOrder::Finite(2)]);
        assert!(matches!(a.check_hom(&b, &mat(1, vec![vec![1]])), Err(FgabError::Discontinuous(_))));
    }

    #[test]
    fn solve_and_coords() {
        let m = mm(2, vec![GenOrder::Finite(8)]);
        let f = mat(1, vec![vec![2]]);
        assert_eq!(solve(&m, &f, &m, &[6]).unwrap().map(|x| x[0] * 2 % 8), Some(6));
        assert_eq!(solve(&m, &f, &m, &[3]).unwrap(), None);
        let c = cokernel_of(&m, &f, &m).unwrap();
        assert_eq!(c.coords(&[3]).unwrap(), vec![1]);
        assert!(c.is_boundary(&[4]).unwrap());
    }

    #[test]
    fn induced_endomorphism() {
        // Z/4 + Z/6 with phi = multiplication by 5.
        let m = mm(2, vec![GenOrder::Finite(4), GenOrder::Finite(6)]);
        let zero = mat(2, vec![vec![0, 0], vec![0, 0]]);
        let k = kernel(&m, &zero, &m).unwrap();
        let phi = mat(2, vec![vec![5, 0], vec![0, 5]]);
        let ind = k.induced(&phi).unwrap();
        for i in 0..ind.rows() {
            let g = k.generator(i).to_vec();
            let img = m.apply(&m, &g, &phi).unwrap();
            assert_eq!(k.coords(&img).unwrap(), ind.row(i).to_vec());
        }
    }
}
