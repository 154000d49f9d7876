//! Normalized bar complex of a finite abelian group: cocycle tables, the
//! Bockstein, cup products with invariant elements, and a brute-force
//! cohomology oracle that shares no code with the periodic engine.

use crate::arith::{invmod, mulmod, reduce_signed, valuation};
use crate::cohomology::{matrix_power, CohomologyError, Result};
use crate::fgab::local::{solve, GenOrder, MarkedModule};
use crate::fgab::{FgModule, IntMatrix};
use crate::Matrix;

const COORDINATE_LIMIT: u128 = 10_000_000;

/// A finite product of cyclic groups `C_{n_1} x ... x C_{n_r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    orders: Vec<u64>,
}

impl FiniteGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.iter().any(|&n| n == 0) {
            return Err(CohomologyError::Shape("cyclic factor of order 0".into()));
        }
        Ok(FiniteGroup { orders })
    }

    pub fn cyclic(n: u64) -> Self {
        FiniteGroup { orders: vec![n] }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    /// Exponent vector of element `i`; the first factor varies slowest.
    pub fn element(&self, mut i: usize) -> Vec<u64> {
        let mut v = vec![0; self.orders.len()];
        for (k, &n) in self.orders.iter().enumerate().rev() {
            v[k] = (i % n as usize) as u64;
            i /= n as usize;
        }
        v
    }

    pub fn index(&self, v: &[u64]) -> usize {
        v.iter().zip(&self.orders).fold(0, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.element(a), self.element(b));
        let v: Vec<u64> = x.iter().zip(&y).zip(&self.orders).map(|((a, b), n)| (a + b) % n).collect();
        self.index(&v)
    }
}

/// Action matrix of every group element, from the generator matrices.
fn element_actions(g: &FiniteGroup, m: &MarkedModule, gens: &[Matrix]) -> Result<Vec<Matrix>> {
    if gens.len() != g.orders.len() {
        return Err(CohomologyError::Shape("one action matrix per factor".into()));
    }
    (0..g.size())
        .map(|i| {
            let mut acc = m.reduce_matrix(&m.identity());
            for (k, &e) in g.element(i).iter().enumerate() {
                acc = m.compose(&acc, &matrix_power(m, &gens[k], e as u128)?)?;
            }
            Ok(acc)
        })
        .collect()
}

/// A normalized cochain on a finite group with values in a finite module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleTable {
    pub group: FiniteGroup,
    pub module: MarkedModule,
    pub action: Vec<Matrix>,
    pub degree: usize,
    /// Values on all `|G|^degree` tuples; the first argument varies slowest.
    pub values: Vec<Vec<i128>>,
}

impl CocycleTable {
    pub fn new(
        group: FiniteGroup,
        module: MarkedModule,
        action: Vec<Matrix>,
        degree: usize,
        values: Vec<Vec<i128>>,
    ) -> Result<Self> {
        if module.orders().contains(&GenOrder::Free) {
            return Err(CohomologyError::Shape("cocycle tables need a finite module".into()));
        }
        if values.len() != group.size().pow(degree as u32) || values.iter().any(|v| v.len() != module.len()) {
            return Err(CohomologyError::Shape("value table has the wrong shape".into()));
        }
        let values: Vec<Vec<i128>> = values.iter().map(|v| module.reduce(v)).collect();
        let t = CocycleTable { group, module, action, degree, values };
        for (i, v) in t.values.iter().enumerate() {
            if t.tuple(i).contains(&0) && v.iter().any(|&x| x != 0) {
                return Err(CohomologyError::Shape(format!("not normalized at tuple {:?}", t.tuple(i))));
            }
        }
        Ok(t)
    }

    pub fn tuple(&self, i: usize) -> Vec<usize> {
        tuple_of(self.group.size(), self.degree, i)
    }

    pub fn value(&self, args: &[usize]) -> &[i128] {
        &self.values[index_of(self.group.size(), args)]
    }

    /// Pointwise check of the cocycle identity on all tuples.
    pub fn is_cocycle(&self) -> Result<bool> {
        let acts = element_actions(&self.group, &self.module, &self.action)?;
        let n = self.group.size();
        let s = self.degree;
        for i in 0..n.pow(s as u32 + 1) {
            let sig = tuple_of(n, s + 1, i);
            let mut acc = vec![0i128; self.module.len()];
            let first = self.module.apply(&self.module, self.value(&sig[1..]), &acts[sig[0]])?;
            add_into(&self.module, &mut acc, &first, 1);
            for f in 1..=s {
                let mut tau = sig[..f - 1].to_vec();
                tau.push(self.group.mul(sig[f - 1], sig[f]));
                tau.extend_from_slice(&sig[f + 1..]);
                add_into(&self.module, &mut acc, self.value(&tau), if f % 2 == 0 { 1 } else { -1 });
            }
            add_into(&self.module, &mut acc, self.value(&sig[..s]), if (s + 1) % 2 == 0 { 1 } else { -1 });
            if !self.module.is_zero_element(&acc) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn normalized_vector(&self) -> Vec<i128> {
        let n = self.group.size();
        let mut out = Vec::new();
        for i in 0..n.pow(self.degree as u32) {
            if !self.tuple(i).contains(&0) {
                out.extend_from_slice(&self.values[i]);
            }
        }
        out
    }
}

fn tuple_of(n: usize, s: usize, mut i: usize) -> Vec<usize> {
    let mut t = vec![0; s];
    for k in (0..s).rev() {
        t[k] = i % n;
        i /= n;
    }
    t
}

fn index_of(n: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

fn add_into(m: &MarkedModule, acc: &mut [i128], x: &[i128], sign: i128) {
    for (j, (a, &b)) in acc.iter_mut().zip(x).enumerate() {
        *a = reduce_signed(*a + sign * b, m.modulus(j)) as i128;
    }
}

/// Normalized `s`-cochains as a marked module, one copy of `m` per tuple of
/// non-identity elements.
fn cochain_module(m: &MarkedModule, n: usize, s: usize) -> MarkedModule {
    let prefixes: Vec<String> = (0..(n - 1).pow(s as u32))
        .map(|i| format!("{:?}", tuple_of(n - 1, s, i).iter().map(|x| x + 1).collect::<Vec<_>>()))
        .collect();
    m.copies(&prefixes)
}

/// Matrix of the normalized bar differential `C^s -> C^{s+1}`.
fn bar_differential(g: &FiniteGroup, m: &MarkedModule, acts: &[Matrix], s: usize) -> Matrix {
    let n = g.size();
    let k = m.len();
    let src_blocks = (n - 1).pow(s as u32);
    let tgt_blocks = (n - 1).pow(s as u32 + 1);
    let mut d = IntMatrix::zeros(src_blocks * k, tgt_blocks * k);
    let block_of = |tau: &[usize]| -> Option<usize> {
        if tau.contains(&0) {
            return None;
        }
        Some(tau.iter().fold(0, |acc, &x| acc * (n - 1) + (x - 1)))
    };
    for c in 0..tgt_blocks {
        let sig: Vec<usize> = tuple_of(n - 1, s + 1, c).iter().map(|x| x + 1).collect();
        let mut add = |tau: &[usize], block: &dyn Fn(usize, usize) -> i128| {
            if let Some(r) = block_of(tau) {
                for x in 0..k {
                    for y in 0..k {
                        let v = d.get(r * k + x, c * k + y) + block(x, y);
                        d.set(r * k + x, c * k + y, reduce_signed(v, m.modulus(y)) as i128);
                    }
                }
            }
        };
        let t0 = acts[sig[0]].clone();
        add(&sig[1..], &|x, y| t0.get(x, y));
        for f in 1..=s {
            let mut tau = sig[..f - 1].to_vec();
            tau.push(g.mul(sig[f - 1], sig[f]));
            tau.extend_from_slice(&sig[f + 1..]);
            let sign = if f % 2 == 0 { 1 } else { -1 };
            add(&tau, &|x, y| if x == y { sign } else { 0 });
        }
        let sign = if (s + 1) % 2 == 0 { 1 } else { -1 };
        add(&sig[..s], &|x, y| if x == y { sign } else { 0 });
    }
    d
}

/// Arithmetic modulo `l^e`, kept separate from the p-adic engine on purpose.
struct Residues {
    ell: u64,
    e: u32,
    q: u64,
}

impl Residues {
    fn val(&self, x: u64) -> u32 {
        if x == 0 {
            return self.e;
        }
        let mut v = 0;
        let mut x = x;
        while x % self.ell == 0 {
            x /= self.ell;
            v += 1;
        }
        v
    }

    fn inv(&self, u: u64) -> u64 {
        invmod(u as u128, self.q as u128).expect("unit") as u64
    }

    /// Echelon reduction by minimal-valuation pivots; returns pivot
    /// valuations and, when asked, the row transform.
    fn reduce(&self, rows: &[Vec<u64>], cols: usize, track: bool) -> (Vec<u32>, Vec<Vec<u64>>) {
        let q = self.q;
        let r = rows.len();
        let mut a: Vec<Vec<u64>> = rows.to_vec();
        let mut p: Vec<Vec<u64>> = if track {
            (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect()
        } else {
            Vec::new()
        };
        let mut used_cols = vec![false; cols];
        let mut vals = Vec::new();
        for t in 0..r.min(cols) {
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate() {
                    if x == 0 || used_cols[j] {
                        continue;
                    }
                    let v = self.val(x);
                    if best.map_or(true, |b| v < b.0) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
            let Some((v, pi, pj)) = best else { break };
            a.swap(t, pi);
            if track {
                p.swap(t, pi);
            }
            used_cols[pj] = true;
            let lv = self.ell.pow(v);
            let inv = self.inv(a[t][pj] / lv);
            for x in a[t].iter_mut() {
                *x = *x * inv % q;
            }
            if track {
                for x in p[t].iter_mut() {
                    *x = *x * inv % q;
                }
            }
            let pivot_a = a[t].clone();
            let pivot_p = if track { p[t].clone() } else { Vec::new() };
            for i in 0..r {
                if i == t || a[i][pj] == 0 {
                    continue;
                }
                let f = a[i][pj] / lv;
                for (x, y) in a[i].iter_mut().zip(&pivot_a) {
                    *x = (*x + q - f * y % q) % q;
                }
                if track {
                    for (x, y) in p[i].iter_mut().zip(&pivot_p) {
                        *x = (*x + q - f * y % q) % q;
                    }
                }
            }
            vals.push(v);
        }
        (vals, p)
    }

    /// `log_l` of the size of the span of `rows`.
    fn log_span(&self, rows: &[Vec<u64>], cols: usize) -> u32 {
        let (vals, _) = self.reduce(rows, cols, false);
        vals.iter().map(|v| self.e - v).sum()
    }

    /// Generators of `{x : x A = 0}`.
    fn left_kernel(&self, rows: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
        let (vals, p) = self.reduce(rows, cols, true);
        p.into_iter()
            .enumerate()
            .filter_map(|(t, row)| match vals.get(t) {
                Some(&v) if v == 0 => None,
                Some(&v) => {
                    let s = self.ell.pow(self.e - v);
                    Some(row.into_iter().map(|x| x * s % self.q).collect())
                }
                None => Some(row),
            })
            .collect()
    }
}

/// `H^s(G, M)` by brute force on the normalized bar complex.
pub fn bar_oracle(orders: &[u64], module: &MarkedModule, action: &[Matrix], s: usize) -> Result<FgModule> {
    let g = FiniteGroup::new(orders.to_vec())?;
    if module.orders().contains(&GenOrder::Free) {
        return Err(CohomologyError::Shape("the oracle needs a finite module".into()));
    }
    let n = g.size();
    let k = module.len() as u128;
    let coords: u128 = (0..=s as u32 + 1).map(|j| (n as u128 - 1).pow(j) * k).sum();
    if coords > COORDINATE_LIMIT {
        return Err(CohomologyError::TooLarge(coords));
    }
    let p = module.p();
    if n == 1 {
        return Ok(if s == 0 { module.structure()? } else { FgModule::zero(p, module.precision()) });
    }
    let acts = element_actions(&g, module, action)?;
    let d_in = (s > 0).then(|| bar_differential(&g, module, &acts, s - 1));
    let d_out = bar_differential(&g, module, &acts, s);
    let c_s = cochain_module(module, n, s);
    let c_next = cochain_module(module, n, s + 1);

    let mut primes: Vec<u64> = Vec::new();
    for o in module.orders() {
        if let GenOrder::Finite(m) = o {
            primes.extend(crate::arith::factor(*m).into_iter().map(|(q, _)| q));
        }
    }
    primes.sort_unstable();
    primes.dedup();

    let mut orders_out = Vec::new();
    for ell in primes {
        // l-primary coordinates: generator i contributes l^{a_i} with cofactor m_i.
        let comp = |m: &MarkedModule| -> Vec<(usize, u32, u128)> {
            m.orders()
                .iter()
                .enumerate()
                .filter_map(|(i, o)| {
                    let GenOrder::Finite(n) = *o else { return None };
                    let a = valuation(n, ell).unwrap_or(0);
                    (a > 0).then(|| (i, a, n / (ell as u128).pow(a)))
                })
                .collect()
        };
        let cs = comp(&c_s);
        let cn = comp(&c_next);
        let e = cs.iter().chain(&cn).map(|x| x.1).max().unwrap_or(0);
        if cs.is_empty() {
            continue;
        }
        let res = Residues { ell, e, q: ell.pow(e) };
        let local = |d: &Matrix, src: &[(usize, u32, u128)], tgt: &[(usize, u32, u128)], tm: &MarkedModule| {
            src.iter()
                .map(|&(i, _, mi)| {
                    tgt.iter()
                        .map(|&(j, aj, mj)| {
                            let n = tm.modulus(j);
                            let la = (ell as u128).pow(aj);
                            let x = mulmod(reduce_signed(d.get(i, j), n), mi % n, n) % la;
                            mulmod(x, invmod(mj % la, la).expect("unit"), la) as u64
                        })
                        .collect::<Vec<u64>>()
                })
                .collect::<Vec<_>>()
        };
        // M_l = sum Z/l^{a_i}, presented over Z/l^e by the relations l^{a_i} e_i.
        let rel = |c: &[(usize, u32, u128)]| -> Vec<Vec<u64>> {
            (0..c.len())
                .map(|t| (0..c.len()).map(|u| if u == t { ell.pow(c[t].1) % res.q } else { 0 }).collect())
                .collect()
        };
        let mut stacked = local(&d_out, &cs, &cn, &c_next);
        stacked.extend(rel(&cn));
        let kernel: Vec<Vec<u64>> =
            res.left_kernel(&stacked, cn.len()).into_iter().map(|r| r[..cs.len()].to_vec()).collect();
        let mut base = rel(&cs);
        if let Some(d) = &d_in {
            let c_prev = cochain_module(module, n, s - 1);
            let cp = comp(&c_prev);
            base.extend(local(d, &cp, &cs, &c_s));
        }
        let log_base = res.log_span(&base, cs.len());
        let mut logs = Vec::new();
        for j in 0..=e {
            let lj = ell.pow(j);
            let mut rows: Vec<Vec<u64>> =
                kernel.iter().map(|r| r.iter().map(|&x| x * lj % res.q).collect()).filter(|r: &Vec<u64>| r.iter().any(|&x| x != 0)).collect();
            rows.extend(base.iter().cloned());
            logs.push(res.log_span(&rows, cs.len()) - log_base);
        }
        // logs[j] = log |l^j H|; factors of order >= l^{j+1} number logs[j] - logs[j+1].
        for j in 1..=e as usize {
            let at_least_j = logs[j - 1] - logs[j];
            let at_least_next = if j < e as usize { logs[j] - logs[j + 1] } else { 0 };
            for _ in 0..(at_least_j - at_least_next) {
                orders_out.push((ell as u128).pow(j as u32));
            }
        }
    }
    Ok(FgModule::new(p, module.precision(), 0, orders_out)?)
}

/// `beta(chi)(g, h) = (chi(g) + chi(h) - chi(gh)) / k`, with values in `Z/modulus`.
pub fn bockstein(group: &FiniteGroup, k: u64, chi: &[u64], modulus: u128) -> Result<CocycleTable> {
    if chi.len() != group.orders.len() {
        return Err(CohomologyError::NotAHomomorphism("one image per factor".into()));
    }
    for (&n, &c) in group.orders.iter().zip(chi) {
        if (n as u128 * c as u128) % k as u128 != 0 {
            return Err(CohomologyError::NotAHomomorphism(format!("generator of order {n} cannot map to {c} in Z/{k}")));
        }
    }
    let lift = |i: usize| -> u64 {
        group.element(i).iter().zip(chi).map(|(&e, &c)| e * c).sum::<u64>() % k
    };
    let n = group.size();
    let module = MarkedModule::new(group_p(modulus), 1, vec![GenOrder::Finite(modulus)], vec!["1".into()])?;
    let values = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            vec![((lift(a) + lift(b) - lift(group.mul(a, b))) / k) as i128]
        })
        .collect();
    let action = vec![module.identity(); group.orders.len()];
    CocycleTable::new(group.clone(), module, action, 2, values)
}

fn group_p(modulus: u128) -> u64 {
    crate::arith::factor(modulus).first().map_or(2, |f| f.0)
}

/// `(g, h) -> beta(g, h) * v` for an invariant element `v`.
pub fn cup_with_unit(beta: &CocycleTable, module: &MarkedModule, action: &[Matrix], v: &[i128]) -> Result<CocycleTable> {
    if beta.degree != 2 || beta.module.len() != 1 {
        return Err(CohomologyError::Shape("expected an integral 2-cocycle".into()));
    }
    for g in action {
        let gv = module.apply(module, v, g)?;
        if module.reduce(&gv) != module.reduce(v) {
            return Err(CohomologyError::Shape("the element is not invariant".into()));
        }
    }
    let values = beta
        .values
        .iter()
        .map(|b| module.reduce(&v.iter().map(|&x| x * b[0]).collect::<Vec<_>>()))
        .collect();
    CocycleTable::new(beta.group.clone(), module.clone(), action.to_vec(), 2, values)
}

/// A cochain whose coboundary is the difference of two cocycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub cochain: CocycleTable,
}

/// Decides whether `c1 - c2` is a coboundary, returning a witness when it is.
pub fn cocycles_cohomologous(c1: &CocycleTable, c2: &CocycleTable) -> Result<Option<Witness>> {
    if c1.group != c2.group || c1.module != c2.module || c1.degree != c2.degree || c1.action != c2.action {
        return Err(CohomologyError::Shape("cocycles live in different complexes".into()));
    }
    let s = c1.degree;
    if s == 0 {
        return Err(CohomologyError::Shape("degree 0 has no coboundaries".into()));
    }
    let g = &c1.group;
    let n = g.size();
    let m = &c1.module;
    let acts = element_actions(g, m, &c1.action)?;
    let src = cochain_module(m, n, s - 1);
    let tgt = cochain_module(m, n, s);
    let d = bar_differential(g, m, &acts, s - 1);
    let v1 = c1.normalized_vector();
    let v2 = c2.normalized_vector();
    let diff: Vec<i128> = v1.iter().zip(&v2).map(|(a, b)| a - b).collect();
    let Some(x) = solve(&src, &d, &tgt, &tgt.reduce(&diff))? else { return Ok(None) };
    let k = m.len();
    let mut values = vec![vec![0i128; k]; n.pow(s as u32 - 1)];
    let mut block = 0;
    for (i, val) in values.iter_mut().enumerate() {
        if tuple_of(n, s - 1, i).contains(&0) {
            continue;
        }
        *val = x[block * k..(block + 1) * k].to_vec();
        block += 1;
    }
    let cochain = CocycleTable::new(g.clone(), m.clone(), c1.action.clone(), s - 1, values)?;
    Ok(Some(Witness { cochain }))
}
