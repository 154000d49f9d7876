//! Units of `pi_0` of the K(1)-local sphere: `Z_2[e]/(2e, e^2)` at `p = 2`, `Z_p` otherwise.

use std::collections::BTreeMap;

use crate::arith::{checked_pow, factor};
use crate::fgab::FgModule;
use crate::height1::Result;

/// An element `a + b e` with `a` mod `p^N` and `b` mod 2; `b` is always 0 at odd `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pi0Elem {
    pub a: u128,
    pub b: u128,
}

/// `pi_0 S_{K(1)}` truncated at `p^N`.
#[derive(Clone, Copy, Debug)]
pub struct Pi0Sphere {
    pub p: u64,
    pub precision: u32,
}

impl Pi0Sphere {
    fn modulus(&self) -> u128 {
        checked_pow(self.p, self.precision).expect("small precision")
    }

    fn has_epsilon(&self) -> bool {
        self.p == 2
    }

    pub fn one(&self) -> Pi0Elem {
        Pi0Elem { a: 1, b: 0 }
    }

    /// `(a + b e)(c + d e) = ac + (ad + bc) e`, using `2e = e^2 = 0`.
    pub fn mul(&self, x: Pi0Elem, y: Pi0Elem) -> Pi0Elem {
        let m = self.modulus();
        let b = if self.has_epsilon() { (x.a * y.b + x.b * y.a) % 2 } else { 0 };
        Pi0Elem { a: x.a * y.a % m, b }
    }

    pub fn units(&self) -> Vec<Pi0Elem> {
        let bs = if self.has_epsilon() { 0..2 } else { 0..1 };
        bs.flat_map(|b| (0..self.modulus()).filter(|a| a % self.p as u128 != 0).map(move |a| Pi0Elem { a, b }))
            .collect()
    }

    fn order(&self, x: Pi0Elem) -> u128 {
        let mut y = x;
        let mut n = 1;
        while y != self.one() {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    /// Invariant factors of the unit group from the counts of `l^j`-torsion elements.
    pub fn unit_torsion(&self) -> Vec<u128> {
        let orders: Vec<u128> = self.units().iter().map(|&x| self.order(x)).collect();
        let size = orders.len() as u128;
        let mut factors = Vec::new();
        for (ell, e) in factor(size) {
            let ell = ell as u128;
            let count = |j: u32| orders.iter().filter(|&&o| ell.pow(j) % o == 0).count() as u128;
            // r_j = number of cyclic factors of order at least l^j.
            let mut prev = 1u128;
            let mut at_least = Vec::new();
            for j in 1..=e {
                let c = count(j);
                at_least.push((c / prev).ilog(ell));
                prev = c;
            }
            for (j, r) in at_least.iter().enumerate() {
                let next = at_least.get(j + 1).copied().unwrap_or(0);
                for _ in 0..(r - next) {
                    factors.push(ell.pow(j as u32 + 1));
                }
            }
        }
        factors
    }
}

/// Units of `(pi_0 S_{K(1)})^x` known to be strict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictUnits {
    pub generators: Vec<String>,
    pub order: u128,
    pub source: String,
    /// Whether these exhaust `pi_0 G_m(S_{K(1)})`; at `p = 2` this is only conjectured.
    pub exhaustive: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct UnitGroupPi0 {
    pub structure: FgModule,
    /// Torsion at the two enumerated precisions.
    pub levels: [(u32, Vec<u128>); 2],
    pub strict: StrictUnits,
}

/// Largest enumerated precision whose upper level `p^{N+1}` stays within `2^11`,
/// and at least the one where the free factor is visible.
pub fn enumeration_precision(p: u64, precision: u32) -> u32 {
    let least = if p == 2 { 3 } else { 2 };
    let mut n = least;
    while n < precision && checked_pow(p, n + 2).map_or(false, |m| m <= 1 << 11) {
        n += 1;
    }
    n
}

/// The unit group by enumeration at `N` and `N + 1`; cyclic factors that grow are `Z_p`.
pub fn unit_group_pi0(p: u64, precision: u32) -> Result<UnitGroupPi0> {
    let n = enumeration_precision(p, precision);
    let low = Pi0Sphere { p, precision: n }.unit_torsion();
    let high = Pi0Sphere { p, precision: n + 1 }.unit_torsion();
    let mut counts: BTreeMap<u128, i64> = BTreeMap::new();
    for f in &low {
        *counts.entry(*f).or_insert(0) += 1;
    }
    let mut stable = Vec::new();
    for f in &high {
        match counts.get_mut(f) {
            Some(c) if *c > 0 => {
                *c -= 1;
                stable.push(*f);
            }
            _ => {}
        }
    }
    let free_rank = high.len() - stable.len();
    let structure = FgModule::new(p, precision, free_rank, stable)?;
    let strict = if p == 2 {
        StrictUnits {
            generators: vec!["1+e".into()],
            order: 2,
            source: "the unit 1 + e of pi_0 S_{K(1)} is strict".into(),
            exhaustive: None,
        }
    } else {
        StrictUnits {
            generators: vec!["omega".into()],
            order: p as u128 - 1,
            source: "the roots of unity mu_{p-1} in Z_p^x are strict".into(),
            exhaustive: None,
        }
    };
    Ok(UnitGroupPi0 { structure, levels: [(n, low), (n + 1, high)], strict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_groups() {
        assert_eq!(unit_group_pi0(2, 16).unwrap().structure.to_string(), "Z_2 + Z/2 + Z/2");
        assert_eq!(unit_group_pi0(3, 16).unwrap().structure.to_string(), "Z_3 + Z/2");
        assert_eq!(unit_group_pi0(5, 16).unwrap().structure.to_string(), "Z_5 + Z/4");
        assert_eq!(unit_group_pi0(7, 16).unwrap().structure.to_string(), "Z_7 + Z/6");
    }

    #[test]
    fn epsilon_relations() {
        let r = Pi0Sphere { p: 2, precision: 4 };
        let e1 = Pi0Elem { a: 1, b: 1 };
        assert_eq!(r.mul(e1, e1), r.one());
        assert_eq!(r.units().len(), 16);
        let mut t = r.unit_torsion();
        t.sort();
        assert_eq!(t, vec![2, 2, 4]);
    }
}
