use std::fmt;

use crate::arith::{checked_pow, factor, valuation};
use crate::fgab::FgabError;

/// One cyclic summand of an elementary-divisor decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elementary {
    Free,
    Power { prime: u64, exp: u32 },
}

impl Elementary {
    pub fn order(self) -> Option<u128> {
        match self {
            Elementary::Free => None,
            Elementary::Power { prime, exp } => checked_pow(prime, exp),
        }
    }
}

/// A finitely generated `Z_p`-module with exact torsion, in invariant-factor form.
///
/// Equality ignores the precision the module was computed at.
#[derive(Clone, Debug, Eq)]
pub struct FgModule {
    p: u64,
    precision: u32,
    free_rank: usize,
    torsion: Vec<u128>,
}

impl PartialEq for FgModule {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl FgModule {
    /// Builds the canonical module `Z_p^free_rank + sum Z/orders`.
    ///
    /// `orders` may be any list of positive cyclic orders; unit orders are dropped.
    pub fn new(
        p: u64,
        precision: u32,
        free_rank: usize,
        orders: impl IntoIterator<Item = u128>,
    ) -> Result<Self, FgabError> {
        let mut by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for n in orders {
            if n == 0 {
                return Err(FgabError::InvalidModule("cyclic order 0".into()));
            }
            for (q, e) in factor(n) {
                if q == p && e > precision {
                    return Err(FgabError::PrecisionOverflow { order: n, p, precision });
                }
                match by_prime.iter_mut().find(|(r, _)| *r == q) {
                    Some((_, v)) => v.push(e),
                    None => by_prime.push((q, vec![e])),
                }
            }
        }
        let len = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut torsion = vec![1u128; len];
        for (q, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                let f = checked_pow(q, e).ok_or(FgabError::Overflow)?;
                torsion[i] = torsion[i].checked_mul(f).ok_or(FgabError::Overflow)?;
            }
        }
        torsion.reverse();
        Ok(FgModule { p, precision, free_rank, torsion })
    }

    pub fn zero(p: u64, precision: u32) -> Self {
        FgModule { p, precision, free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(p: u64, precision: u32, rank: usize) -> Self {
        FgModule { p, precision, free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(p: u64, precision: u32, n: u128) -> Result<Self, FgabError> {
        Self::new(p, precision, 0, [n])
    }

    /// Builds a module from elementary summands.
    pub fn from_elementary(p: u64, precision: u32, parts: &[Elementary]) -> Result<Self, FgabError> {
        let free = parts.iter().filter(|e| **e == Elementary::Free).count();
        let orders = parts
            .iter()
            .filter_map(|e| match e {
                Elementary::Free => None,
                Elementary::Power { .. } => Some(e.order().ok_or(FgabError::Overflow)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p, precision, free, orders)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Invariant factors `d_1 | d_2 | ...`.
    pub fn torsion(&self) -> &[u128] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u128 {
        self.torsion.iter().product()
    }

    /// Cardinality, or `None` when there is a free summand.
    pub fn order(&self) -> Option<u128> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self
    }

    /// Elementary divisors: free first, then by prime, then by exponent.
    pub fn elementary(&self) -> Vec<Elementary> {
        let mut out = vec![Elementary::Free; self.free_rank];
        let mut powers: Vec<Elementary> = self
            .torsion
            .iter()
            .flat_map(|&d| factor(d))
            .map(|(prime, exp)| Elementary::Power { prime, exp })
            .collect();
        powers.sort();
        out.extend(powers);
        out
    }

    /// Primes dividing the torsion, ascending.
    pub fn torsion_primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.torsion.iter().flat_map(|&d| factor(d)).map(|(q, _)| q).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Number of cyclic summands of the `q`-primary part.
    pub fn q_rank(&self, q: u64) -> usize {
        self.torsion.iter().filter(|&&d| d % q as u128 == 0).count()
    }

    /// The `q`-primary torsion, plus the free part when `q == p`.
    pub fn primary_part(&self, q: u64) -> FgModule {
        let orders = self.torsion.iter().map(|&d| {
            let v = valuation(d, q).unwrap_or(0);
            (q as u128).pow(v)
        });
        let free = if q == self.p { self.free_rank } else { 0 };
        FgModule::new(self.p, self.precision, free, orders).expect("sub-orders of a valid module")
    }

    pub fn direct_sum(&self, other: &FgModule) -> Result<FgModule, FgabError> {
        if self.p != other.p {
            return Err(FgabError::InvalidModule(format!("primes {} and {} differ", self.p, other.p)));
        }
        FgModule::new(
            self.p,
            self.precision.min(other.precision),
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).copied(),
        )
    }
}

impl fmt::Display for FgModule {
    /// Free part first, then torsion from the largest factor down: `Z_2 + Z/4 + Z/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts = std::iter::repeat(format!("Z_{}", self.p))
            .take(self.free_rank)
            .chain(self.torsion.iter().rev().map(|d| format!("Z/{d}")));
        let joined: Vec<String> = parts.collect();
        write!(f, "{}", joined.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let m = FgModule::new(2, 16, 1, [2, 4, 3]).unwrap();
        assert_eq!(m.torsion(), &[2, 12]);
        assert_eq!(m.to_string(), "Z_2 + Z/12 + Z/2");
        assert_eq!(FgModule::new(2, 16, 1, [12, 2]).unwrap(), m);
    }

    #[test]
    fn rendering() {
        assert_eq!(FgModule::zero(3, 16).to_string(), "0");
        assert_eq!(FgModule::new(2, 16, 0, [8, 4]).unwrap().to_string(), "Z/8 + Z/4");
        assert_eq!(FgModule::new(2, 16, 0, [8, 8]).unwrap().to_string(), "Z/8 + Z/8");
    }

    #[test]
    fn precision_is_checked() {
        assert!(matches!(FgModule::cyclic(2, 3, 16), Err(FgabError::PrecisionOverflow { .. })));
        assert!(FgModule::cyclic(2, 3, 8 * 81).is_ok());
    }

    #[test]
    fn elementary_order() {
        let m = FgModule::new(2, 16, 1, [12, 2]).unwrap();
        assert_eq!(
            m.elementary(),
            vec![
                Elementary::Free,
                Elementary::Power { prime: 2, exp: 1 },
                Elementary::Power { prime: 2, exp: 2 },
                Elementary::Power { prime: 3, exp: 1 },
            ]
        );
    }
}
