use crate::cohomology::{matrix_power, minus_one, norm_map, CohomologyError, Factor, FactorKind, GAction, Result};
use crate::fgab::local::{kernel, Homology, MarkedModule, Primary};
use crate::fgab::{FgModule, FgabError, IntMatrix};
use crate::Matrix;

/// A cochain in the total complex: values in the coefficient module indexed
/// by multi-degrees over all factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub terms: Vec<(Vec<usize>, Vec<i128>)>,
}

impl Cochain {
    pub fn single(multi: Vec<usize>, value: Vec<i128>) -> Self {
        Cochain { terms: vec![(multi, value)] }
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.first().map(|(m, _)| m.iter().sum())
    }
}

fn multi_label(full: &[usize]) -> String {
    let parts: Vec<String> = full.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Multi-indices over `bounds` (None = unbounded) summing to `s`, lexicographic.
fn multis(bounds: &[Option<usize>], s: usize) -> Vec<Vec<usize>> {
    fn go(bounds: &[Option<usize>], s: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if bounds.is_empty() {
            if s == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let top = bounds[0].map_or(s, |b| b.min(s));
        for j in (0..=top).rev() {
            prefix.push(j);
            go(&bounds[1..], s - j, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(bounds, s, &mut Vec::new(), &mut out);
    out
}

/// Suffixes `_l` to labels that occur in more than one `l`-primary component.
fn distinguish_primary_labels(m: MarkedModule, comps: &[Component], s: usize) -> Result<MarkedModule> {
    let owners: Vec<u64> = comps
        .iter()
        .flat_map(|c| std::iter::repeat(c.primary.ell).take(c.homology[s].module().len()))
        .collect();
    let labels = m.labels().to_vec();
    let renamed: Vec<String> = labels
        .iter()
        .zip(&owners)
        .map(|(l, ell)| if labels.iter().filter(|x| *x == l).count() > 1 { format!("{l}_{ell}") } else { l.clone() })
        .collect();
    Ok(m.relabel(renamed)?)
}

/// One primary summand of the coefficients, after taking fixed points of the
/// procyclic factors whose pro-order is prime to it.
#[derive(Clone, Debug)]
struct Component {
    primary: Primary,
    fixed: Option<Homology>,
    reduced: Vec<usize>,
    active: Vec<usize>,
    working: MarkedModule,
    multis: Vec<Vec<Vec<usize>>>,
    homology: Vec<Homology>,
}

impl Component {
    fn full_multi(&self, active_multi: &[usize], n_factors: usize) -> Vec<usize> {
        let mut full = vec![0; n_factors];
        for (a, &i) in self.active.iter().enumerate() {
            full[i] = active_multi[a];
        }
        full
    }

    fn to_working(&self, y: &[i128]) -> Result<Vec<i128>> {
        Ok(match &self.fixed {
            Some(k) => k.coords(y)?,
            None => y.to_vec(),
        })
    }

    fn from_working(&self, w: &[i128]) -> Result<Vec<i128>> {
        Ok(match &self.fixed {
            Some(k) => {
                let gens = IntMatrix::from_rows(self.primary.module.len(), k.generators().to_vec())?;
                let row = IntMatrix::from_rows(w.len(), vec![w.to_vec()])?;
                self.primary.module.compose(&row, &gens)?.row(0).to_vec()
            }
            None => w.to_vec(),
        })
    }

    fn working_endo(&self, global: &MarkedModule, f: &Matrix) -> Result<Matrix> {
        let restricted = self.primary.restrict(global, f)?;
        Ok(match &self.fixed {
            Some(k) => k.induced(&restricted)?,
            None => restricted,
        })
    }
}

/// Cohomology of the total complex of a product group, degree by degree,
/// with cocycle representatives.
#[derive(Clone, Debug)]
pub struct TotalCohomology {
    factors: Vec<Factor>,
    module: MarkedModule,
    comps: Vec<Component>,
    degrees: Vec<MarkedModule>,
}

impl TotalCohomology {
    pub fn compute(act: &GAction, s_max: usize) -> Result<Self> {
        let factors = act.group().factors().to_vec();
        let global = act.module().clone();
        let p = global.p();
        let precision = global.precision();
        let mut comps = Vec::new();
        for primary in global.primary_parts() {
            let ell = primary.ell;
            let acts = act
                .generators()
                .iter()
                .map(|g| primary.restrict(&global, g))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let reduced: Vec<usize> = factors
                .iter()
                .enumerate()
                .filter(|(_, f)| matches!(f.kind, FactorKind::Procyclic(q) if q != ell))
                .map(|(i, _)| i)
                .collect();
            let active: Vec<usize> = (0..factors.len()).filter(|i| !reduced.contains(i)).collect();
            let base = &primary.module;
            for &i in &reduced {
                let FactorKind::Procyclic(q) = factors[i].kind else { unreachable!() };
                check_pro_q_order(base, &acts[i], q, &factors[i].generator)?;
            }
            let (fixed, working, actions) = if reduced.is_empty() {
                (None, base.clone(), active.iter().map(|&i| acts[i].clone()).collect::<Vec<_>>())
            } else {
                let prefixes: Vec<String> = reduced.iter().map(|&i| factors[i].generator.clone()).collect();
                let target = base.copies(&prefixes);
                let mut rows = vec![vec![0i128; target.len()]; base.len()];
                for (r, &i) in reduced.iter().enumerate() {
                    let d = minus_one(base, &acts[i]);
                    for a in 0..base.len() {
                        for b in 0..base.len() {
                            rows[a][r * base.len() + b] = d.get(a, b);
                        }
                    }
                }
                let map = IntMatrix::from_rows(target.len(), rows)?;
                let k = kernel(base, &map, &target)?;
                let working = k.module().clone();
                let actions = active.iter().map(|&i| k.induced(&acts[i])).collect::<std::result::Result<Vec<_>, _>>()?;
                (Some(k), working, actions)
            };
            let bounds: Vec<Option<usize>> = active
                .iter()
                .map(|&i| if factors[i].kind.is_procyclic() { Some(1) } else { None })
                .collect();
            let all_multis: Vec<Vec<Vec<usize>>> = (0..=s_max + 1).map(|s| multis(&bounds, s)).collect();
            let n = factors.len();
            let full = |m: &[usize]| {
                let mut f = vec![0; n];
                for (a, &i) in active.iter().enumerate() {
                    f[i] = m[a];
                }
                f
            };
            let cochains: Vec<MarkedModule> = all_multis
                .iter()
                .map(|ms| working.copies(&ms.iter().map(|m| multi_label(&full(m))).collect::<Vec<_>>()))
                .collect();
            let minus: Vec<Matrix> = actions.iter().map(|g| minus_one(&working, g)).collect();
            let norms: Vec<Option<Matrix>> = active
                .iter()
                .zip(&actions)
                .map(|(&i, g)| match factors[i].kind {
                    FactorKind::FiniteCyclic(order) => norm_map(&working, g, order).map(Some),
                    _ => Ok(None),
                })
                .collect::<Result<_>>()?;
            let k = working.len();
            let mut diffs = Vec::new();
            for s in 0..=s_max {
                let src = &all_multis[s];
                let tgt = &all_multis[s + 1];
                let mut d = IntMatrix::zeros(src.len() * k, tgt.len() * k);
                for (r, m) in src.iter().enumerate() {
                    let mut sign_sum = 0usize;
                    for a in 0..active.len() {
                        let mut next = m.clone();
                        next[a] += 1;
                        let op = match (&norms[a], m[a] % 2) {
                            (Some(_), 0) | (None, 0) if bounds[a].map_or(true, |b| m[a] < b) => Some(&minus[a]),
                            (Some(nm), 1) => Some(nm),
                            _ => None,
                        };
                        if let (Some(op), Some(c)) = (op, tgt.iter().position(|t| *t == next)) {
                            let block = if sign_sum % 2 == 1 { working.scale_matrix(op, -1) } else { op.clone() };
                            for x in 0..k {
                                for y in 0..k {
                                    d.set(r * k + x, c * k + y, block.get(x, y));
                                }
                            }
                        }
                        sign_sum += m[a];
                    }
                }
                diffs.push(d);
            }
            let zero = MarkedModule::zero(p, precision);
            let mut homology = Vec::new();
            for s in 0..=s_max {
                let h = if s == 0 {
                    Homology::compute(&zero, &IntMatrix::zeros(0, cochains[0].len()), &cochains[0], &diffs[0], &cochains[1])?
                } else {
                    Homology::compute(&cochains[s - 1], &diffs[s - 1], &cochains[s], &diffs[s], &cochains[s + 1])?
                };
                homology.push(h);
            }
            comps.push(Component { primary, fixed, reduced, active, working, multis: all_multis, homology });
        }
        let mut degrees = Vec::new();
        for s in 0..=s_max {
            let mut m = MarkedModule::zero(p, precision);
            for c in &comps {
                m = m.direct_sum(c.homology[s].module())?;
            }
            degrees.push(distinguish_primary_labels(m, &comps, s)?);
        }
        Ok(TotalCohomology { factors, module: global, comps, degrees })
    }

    pub fn s_max(&self) -> usize {
        self.degrees.len() - 1
    }

    /// `H^s` as a marked module; generator labels name the supporting multi-degree.
    pub fn degree(&self, s: usize) -> &MarkedModule {
        &self.degrees[s]
    }

    pub fn structures(&self) -> Result<Vec<FgModule>> {
        self.degrees.iter().map(|d| d.structure().map_err(CohomologyError::from)).collect()
    }

    fn locate(&self, s: usize, i: usize) -> Option<(usize, usize)> {
        let mut offset = 0;
        for (c, comp) in self.comps.iter().enumerate() {
            let n = comp.homology[s].module().len();
            if i < offset + n {
                return Some((c, i - offset));
            }
            offset += n;
        }
        None
    }

    /// Cocycle representing generator `i` of `H^s`.
    pub fn representative(&self, s: usize, i: usize) -> Result<Cochain> {
        let (c, j) = self.locate(s, i).ok_or_else(|| CohomologyError::Shape(format!("no generator {i} in degree {s}")))?;
        let comp = &self.comps[c];
        let v = comp.homology[s].generator(j);
        let k = comp.working.len();
        let mut terms = Vec::new();
        for (r, m) in comp.multis[s].iter().enumerate() {
            let block = &v[r * k..(r + 1) * k];
            if block.iter().all(|&x| x == 0) {
                continue;
            }
            let y = comp.from_working(block)?;
            terms.push((comp.full_multi(m, self.factors.len()), comp.primary.embed(&self.module, &y)));
        }
        Ok(Cochain { terms })
    }

    /// Coordinates in `H^s` of the class of a cocycle.
    pub fn coords(&self, s: usize, cochain: &Cochain) -> Result<Vec<i128>> {
        let mut out = Vec::new();
        for comp in &self.comps {
            let k = comp.working.len();
            let mut v = vec![0i128; comp.multis[s].len() * k];
            for (multi, value) in &cochain.terms {
                if multi.len() != self.factors.len() || multi.iter().sum::<usize>() != s {
                    return Err(CohomologyError::Shape(format!("multi-degree {multi:?} is not in degree {s}")));
                }
                let y = comp.primary.project(&self.module, value);
                if y.iter().all(|&x| x == 0) {
                    continue;
                }
                if comp.reduced.iter().any(|&i| multi[i] != 0) {
                    return Err(CohomologyError::Shape(format!("multi-degree {multi:?} vanishes on this summand")));
                }
                let am: Vec<usize> = comp.active.iter().map(|&i| multi[i]).collect();
                let r = comp.multis[s]
                    .iter()
                    .position(|m| *m == am)
                    .ok_or_else(|| CohomologyError::Shape(format!("multi-degree {multi:?} out of range")))?;
                let w = comp.to_working(&y)?;
                for (x, wv) in w.iter().enumerate() {
                    v[r * k + x] += wv;
                }
            }
            let cs = comp.homology[s].middle().reduce(&v);
            out.extend(comp.homology[s].coords(&cs)?);
        }
        Ok(out)
    }

    /// Matrix of the endomorphism of `H^s` induced by a module endomorphism
    /// commuting with the action.
    pub fn induced(&self, s: usize, tau: &Matrix) -> Result<Matrix> {
        let n = self.degrees[s].len();
        let mut out = IntMatrix::zeros(n, n);
        let mut offset = 0;
        for comp in &self.comps {
            let tw = comp.working_endo(&self.module, tau)?;
            let k = comp.working.len();
            let blocks = comp.multis[s].len();
            let mut big = IntMatrix::zeros(blocks * k, blocks * k);
            for b in 0..blocks {
                for x in 0..k {
                    for y in 0..k {
                        big.set(b * k + x, b * k + y, tw.get(x, y));
                    }
                }
            }
            let ind = comp.homology[s].induced(&big)?;
            for x in 0..ind.rows() {
                for y in 0..ind.cols() {
                    out.set(offset + x, offset + y, ind.get(x, y));
                }
            }
            offset += ind.rows();
        }
        Ok(out)
    }
}

/// Checks that `g` has order a power of `q`, as continuity of a `Z_q`-action on
/// a module prime to `q` requires.
fn check_pro_q_order(m: &MarkedModule, g: &Matrix, q: u64, name: &str) -> Result<()> {
    let id = m.reduce_matrix(&m.identity());
    let mut pow = m.reduce_matrix(g);
    for _ in 0..64 {
        if pow == id {
            return Ok(());
        }
        pow = matrix_power(m, &pow, q as u128)?;
    }
    Err(CohomologyError::Fgab(FgabError::Discontinuous(format!(
        "generator {name} does not act through a finite {q}-group"
    ))))
}
