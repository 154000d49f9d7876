use crate::arith::{checked_pow, valuation};
use crate::fgab::matrix::IntMatrix;
use crate::fgab::module::{Elementary, FgModule};
use crate::fgab::snf::smith_normal_form;
use crate::fgab::FgabError;

fn same_prime(a: &FgModule, b: &FgModule) -> Result<(), FgabError> {
    if a.p() != b.p() {
        return Err(FgabError::InvalidModule(format!("primes {} and {} differ", a.p(), b.p())));
    }
    Ok(())
}

/// Order of the coordinate of `Ext(Z/q^a, S)` for one elementary summand `S` of the sub.
fn coordinate_range(p: u64, quot: Elementary, sub: Elementary) -> u128 {
    match (quot, sub) {
        (Elementary::Free, _) => 1,
        (Elementary::Power { prime, exp }, Elementary::Free) => {
            if prime == p {
                checked_pow(prime, exp).unwrap_or(1)
            } else {
                1
            }
        }
        (Elementary::Power { prime, exp }, Elementary::Power { prime: q, exp: e }) => {
            if prime == q {
                checked_pow(prime, exp.min(e)).unwrap_or(1)
            } else {
                1
            }
        }
    }
}

/// `Ext^1(quot, sub)` over `Z_p`.
pub fn ext_group(quot: &FgModule, sub: &FgModule) -> Result<FgModule, FgabError> {
    same_prime(quot, sub)?;
    let p = quot.p();
    let sub_e = sub.elementary();
    let orders: Vec<u128> = quot
        .elementary()
        .into_iter()
        .flat_map(|q| sub_e.iter().map(move |&s| coordinate_range(p, q, s)))
        .collect();
    FgModule::new(p, quot.precision().min(sub.precision()), 0, orders)
}

/// Continuous homomorphisms `a -> b`.
pub fn hom_group(a: &FgModule, b: &FgModule) -> Result<FgModule, FgabError> {
    same_prime(a, b)?;
    let p = a.p();
    let precision = a.precision().min(b.precision());
    let mut out = FgModule::zero(p, precision);
    let b_e = b.elementary();
    for src in a.elementary() {
        let piece = match src {
            Elementary::Free => b.primary_part(p),
            Elementary::Power { prime, exp } => {
                let orders = b_e.iter().filter_map(|t| match *t {
                    Elementary::Power { prime: q, exp: e } if q == prime => checked_pow(q, exp.min(e)),
                    _ => None,
                });
                FgModule::new(p, precision, 0, orders)?
            }
        };
        out = out.direct_sum(&piece)?;
    }
    Ok(out)
}

/// An element of `Ext(quot, sub)`.
///
/// Row `i` gives the image of the `i`-th torsion elementary generator of `quot`
/// (times its order) in the elementary coordinates of `sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionClass {
    pub sub: FgModule,
    pub quot: FgModule,
    value: Vec<Vec<u128>>,
}

impl ExtensionClass {
    pub fn new(sub: FgModule, quot: FgModule, value: Vec<Vec<u128>>) -> Result<Self, FgabError> {
        same_prime(&sub, &quot)?;
        let p = sub.p();
        let quot_t: Vec<Elementary> = quot.elementary().into_iter().filter(|e| *e != Elementary::Free).collect();
        let sub_e = sub.elementary();
        if value.len() != quot_t.len() || value.iter().any(|r| r.len() != sub_e.len()) {
            return Err(FgabError::InvalidClass(format!(
                "expected a {}x{} class matrix",
                quot_t.len(),
                sub_e.len()
            )));
        }
        for (i, q) in quot_t.iter().enumerate() {
            for (j, s) in sub_e.iter().enumerate() {
                let range = coordinate_range(p, *q, *s);
                if value[i][j] >= range {
                    return Err(FgabError::InvalidClass(format!(
                        "coordinate ({i},{j}) = {} outside Z/{range}",
                        value[i][j]
                    )));
                }
            }
        }
        Ok(ExtensionClass { sub, quot, value })
    }

    /// The split extension.
    pub fn split(sub: FgModule, quot: FgModule) -> Result<Self, FgabError> {
        let rows = quot.elementary().iter().filter(|e| **e != Elementary::Free).count();
        let cols = sub.elementary().len();
        Self::new(sub, quot, vec![vec![0; cols]; rows])
    }

    /// Class between modules with one elementary summand each.
    pub fn cyclic(sub: FgModule, quot: FgModule, value: u128) -> Result<Self, FgabError> {
        Self::new(sub, quot, vec![vec![value]])
    }

    pub fn value(&self) -> &[Vec<u128>] {
        &self.value
    }

    pub fn is_split(&self) -> bool {
        self.value.iter().flatten().all(|&x| x == 0)
    }
}

/// Middle term of the extension `0 -> sub -> E -> quot -> 0` classified by `e`.
pub fn assemble_extension(e: &ExtensionClass) -> Result<FgModule, FgabError> {
    let p = e.sub.p();
    let precision = e.sub.precision().min(e.quot.precision());
    let sub_e = e.sub.elementary();
    let quot_t: Vec<Elementary> = e.quot.elementary().into_iter().filter(|x| *x != Elementary::Free).collect();
    let mut primes: Vec<u64> = e.sub.torsion_primes();
    primes.extend(e.quot.torsion_primes());
    primes.push(p);
    primes.sort_unstable();
    primes.dedup();

    let mut orders = Vec::new();
    let mut free = e.quot.free_rank();
    for ell in primes {
        let in_ell = |x: &Elementary| match x {
            Elementary::Free => ell == p,
            Elementary::Power { prime, .. } => *prime == ell,
        };
        let sub_cols: Vec<usize> = (0..sub_e.len()).filter(|&j| in_ell(&sub_e[j])).collect();
        let quot_rows: Vec<usize> = (0..quot_t.len()).filter(|&i| in_ell(&quot_t[i])).collect();
        let width = sub_cols.len() + quot_rows.len();
        if width == 0 {
            continue;
        }
        let mut rows: Vec<Vec<i128>> = Vec::new();
        for (c, &j) in sub_cols.iter().enumerate() {
            if let Some(n) = sub_e[j].order() {
                let mut r = vec![0i128; width];
                r[c] = n as i128;
                rows.push(r);
            }
        }
        for (k, &i) in quot_rows.iter().enumerate() {
            let mut r = vec![0i128; width];
            for (c, &j) in sub_cols.iter().enumerate() {
                r[c] = -(e.value[i][j] as i128);
            }
            r[sub_cols.len() + k] = quot_t[i].order().ok_or(FgabError::Overflow)? as i128;
            rows.push(r);
        }
        let m = IntMatrix::from_rows(width, rows)?;
        let snf = smith_normal_form(&m)?;
        let factors = snf.invariant_factors();
        if ell == p {
            free += width - factors.len();
        }
        for d in factors {
            let v = valuation(d as u128, ell).unwrap_or(0);
            if v > 0 {
                orders.push((ell as u128).pow(v));
            }
        }
    }
    FgModule::new(p, precision, free, orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, r: usize) -> FgModule {
        FgModule::free(p, 16, r)
    }
    fn c(p: u64, n: u128) -> FgModule {
        FgModule::cyclic(p, 16, n).unwrap()
    }

    #[test]
    fn ext_examples() {
        assert_eq!(ext_group(&c(2, 8), &z(2, 1)).unwrap(), c(2, 8));
        assert!(ext_group(&z(3, 1), &c(3, 9)).unwrap().is_zero());
        assert_eq!(ext_group(&c(2, 2), &c(2, 4)).unwrap(), c(2, 2));
    }

    #[test]
    fn hom_examples() {
        let units = FgModule::new(2, 16, 1, [2]).unwrap();
        assert_eq!(hom_group(&c(2, 2), &units).unwrap(), c(2, 2));
        assert!(hom_group(&z(3, 1), &c(3, 2)).unwrap().is_zero());
        assert!(hom_group(&c(3, 9), &FgModule::zero(3, 16)).unwrap().is_zero());
    }

    #[test]
    fn assemble_examples() {
        let e = ExtensionClass::cyclic(z(2, 1), c(2, 8), 4).unwrap();
        assert_eq!(assemble_extension(&e).unwrap(), FgModule::new(2, 16, 1, [4]).unwrap());
        let e = ExtensionClass::cyclic(c(2, 2), c(2, 2), 1).unwrap();
        assert_eq!(assemble_extension(&e).unwrap(), c(2, 4));
        let e = ExtensionClass::split(c(2, 2), c(2, 2)).unwrap();
        assert_eq!(assemble_extension(&e).unwrap(), FgModule::new(2, 16, 0, [2, 2]).unwrap());
        assert!(ExtensionClass::cyclic(c(2, 2), c(2, 2), 2).is_err());
    }

    #[test]
    fn mixed_primes() {
        let sub = FgModule::new(3, 16, 1, [2]).unwrap();
        let quot = FgModule::new(3, 16, 0, [6]).unwrap();
        // elementary: sub = [Free, 2^1], quot torsion = [2^1, 3^1]
        let e = ExtensionClass::new(sub, quot, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(assemble_extension(&e).unwrap(), FgModule::new(3, 16, 1, [4]).unwrap());
    }
}
