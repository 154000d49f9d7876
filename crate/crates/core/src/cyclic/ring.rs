//! Galois rings `GR(p^n, k) = (Z/p^n)[x]/(f)` with their Frobenius.

use std::fmt;

use crate::arith::{checked_pow, invmod};
use crate::cyclic::{CyclicError, Result};

/// An element as coefficients of `1, x, ..., x^{k-1}` in `Z/p^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrElem(pub Vec<u128>);

/// The unramified degree-`k` extension of `Z/p^n`, with `sigma` lifting `a -> a^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRing {
    p: u64,
    n: u32,
    k: usize,
    modulus: u128,
    /// Monic, lowest degree first, length `k + 1`.
    poly: Vec<u128>,
    /// `sigma(x)`.
    frob_x: GrElem,
}

/// The least monic irreducible polynomial of degree `k` over `F_p`, in the
/// order of its coefficient vector read as a base-`p` number.
pub fn least_irreducible(p: u64, k: usize) -> Vec<u64> {
    let count = checked_pow(p, k as u32).expect("small field");
    (0..count)
        .map(|c| {
            let mut f = digits(c, p as u128, k);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn digits(mut c: u128, base: u128, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = c % base;
            c /= base;
            d as u64
        })
        .collect()
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = checked_pow(p, d as u32).expect("small field");
        for c in 0..count {
            let mut g = digits(c, p as u128, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `f` by the monic `g` over `F_p`.
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().expect("nonempty");
        let shift = r.len() - dg;
        for (i, &c) in g[..dg].iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - lead * c % p) % p;
        }
    }
    r
}

impl GaloisRing {
    pub fn new(p: u64, n: u32, k: usize) -> Result<Self> {
        if !crate::arith::is_prime(p) || n == 0 || k == 0 {
            return Err(CyclicError::Ring(format!("GR({p}^{n}, {k}) is not a Galois ring")));
        }
        let modulus = checked_pow(p, n).ok_or_else(|| CyclicError::Ring("modulus overflow".into()))?;
        if modulus.checked_mul(modulus).is_none() || checked_pow(p, (n as usize * k) as u32).is_none() {
            return Err(CyclicError::Ring("ring too large".into()));
        }
        let poly = least_irreducible(p, k).into_iter().map(u128::from).collect();
        let mut ring = GaloisRing { p, n, k, modulus, poly, frob_x: GrElem(vec![0; k]) };
        ring.frob_x = ring.frobenius_root()?;
        Ok(ring)
    }

    /// `F_{p^k}`.
    pub fn field(p: u64, k: usize) -> Result<Self> {
        Self::new(p, 1, k)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Rank over the base ring `Z/p^n`.
    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn base_modulus(&self) -> u128 {
        self.modulus
    }

    pub fn polynomial(&self) -> &[u128] {
        &self.poly
    }

    pub fn is_field(&self) -> bool {
        self.n == 1
    }

    pub fn size(&self) -> u128 {
        checked_pow(self.p, self.n * self.k as u32).expect("checked at construction")
    }

    pub fn zero(&self) -> GrElem {
        GrElem(vec![0; self.k])
    }

    pub fn one(&self) -> GrElem {
        self.from_base(1)
    }

    pub fn from_base(&self, a: u128) -> GrElem {
        let mut v = vec![0; self.k];
        v[0] = a % self.modulus;
        GrElem(v)
    }

    pub fn x(&self) -> GrElem {
        let mut v = vec![0; self.k];
        if self.k == 1 {
            v[0] = (self.modulus - self.poly[0]) % self.modulus;
        } else {
            v[1] = 1;
        }
        GrElem(v)
    }

    /// The `i`-th element in the base-`p^n` digit order.
    pub fn element(&self, i: u128) -> GrElem {
        GrElem(digits(i, self.modulus, self.k).into_iter().map(u128::from).collect())
    }

    pub fn elements(&self) -> impl Iterator<Item = GrElem> + '_ {
        (0..self.size()).map(|i| self.element(i))
    }

    pub fn is_base(&self, a: &GrElem) -> bool {
        a.0[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &GrElem, b: &GrElem) -> GrElem {
        GrElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.modulus).collect())
    }

    pub fn neg(&self, a: &GrElem) -> GrElem {
        GrElem(a.0.iter().map(|x| (self.modulus - x) % self.modulus).collect())
    }

    pub fn sub(&self, a: &GrElem, b: &GrElem) -> GrElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: u128, a: &GrElem) -> GrElem {
        GrElem(a.0.iter().map(|x| (c % self.modulus) * x % self.modulus).collect())
    }

    pub fn mul(&self, a: &GrElem, b: &GrElem) -> GrElem {
        let m = self.modulus;
        let mut prod = vec![0u128; 2 * self.k - 1];
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % m;
            }
        }
        for d in (self.k..prod.len()).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, c) in self.poly[..self.k].iter().enumerate() {
                let j = d - self.k + i;
                prod[j] = (prod[j] + m - lead * c % m) % m;
            }
        }
        prod.truncate(self.k);
        GrElem(prod)
    }

    pub fn pow(&self, a: &GrElem, mut e: u128) -> GrElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Units are the elements that are nonzero modulo `p`.
    pub fn is_unit(&self, a: &GrElem) -> bool {
        a.0.iter().any(|&c| c % self.p as u128 != 0)
    }

    pub fn inverse(&self, a: &GrElem) -> Result<GrElem> {
        if !self.is_unit(a) {
            return Err(CyclicError::NotAUnit);
        }
        let field_order = checked_pow(self.p, self.k as u32).expect("checked at construction");
        let mut y = self.pow(a, field_order - 2);
        let two = self.from_base(2);
        for _ in 0..=self.n {
            y = self.mul(&y, &self.sub(&two, &self.mul(a, &y)));
        }
        debug_assert_eq!(self.mul(a, &y), self.one());
        Ok(y)
    }

    fn eval_poly(&self, coeffs: &[u128], r: &GrElem) -> GrElem {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| self.add(&self.mul(&acc, r), &self.from_base(c)))
    }

    /// The root of `f` congruent to `x^p`, by Newton iteration.
    fn frobenius_root(&self) -> Result<GrElem> {
        let derivative: Vec<u128> =
            self.poly.iter().enumerate().skip(1).map(|(i, &c)| (i as u128 * c) % self.modulus).collect();
        let mut r = self.pow(&self.x(), self.p as u128);
        for _ in 0..=self.n {
            let step = self.mul(&self.eval_poly(&self.poly, &r), &self.inverse(&self.eval_poly(&derivative, &r))?);
            r = self.sub(&r, &step);
        }
        if self.eval_poly(&self.poly, &r) != self.zero() {
            return Err(CyclicError::Ring("Newton iteration did not converge".into()));
        }
        Ok(r)
    }

    /// The Frobenius lift, an automorphism of order `k`.
    pub fn sigma(&self, a: &GrElem) -> GrElem {
        self.eval_poly(&a.0, &self.frob_x)
    }

    pub fn sigma_pow(&self, a: &GrElem, i: usize) -> GrElem {
        (0..i % self.k).fold(a.clone(), |acc, _| self.sigma(&acc))
    }

    pub fn norm(&self, a: &GrElem) -> GrElem {
        (0..self.k).fold(self.one(), |acc, i| self.mul(&acc, &self.sigma_pow(a, i)))
    }

    pub fn trace(&self, a: &GrElem) -> GrElem {
        (0..self.k).fold(self.zero(), |acc, i| self.add(&acc, &self.sigma_pow(a, i)))
    }

    /// Matrix of `sigma` on the basis `1, x, ..., x^{k-1}`, one row per basis element.
    pub fn sigma_matrix(&self) -> Vec<Vec<u128>> {
        (0..self.k)
            .map(|j| {
                let mut e = vec![0; self.k];
                e[j] = 1;
                self.sigma(&GrElem(e)).0
            })
            .collect()
    }

    /// Inverse of a base-ring unit.
    pub fn base_inverse(&self, a: u128) -> Result<u128> {
        invmod(a % self.modulus, self.modulus).ok_or(CyclicError::NotAUnit)
    }
}

impl fmt::Display for GaloisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "F_{}^{}", self.p, self.k)
        } else {
            write!(f, "GR({}^{}, {})", self.p, self.n, self.k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(least_irreducible(5, 2), vec![2, 0, 1]);
    }

    #[test]
    fn frobenius_has_order_k_and_fixes_the_base() {
        for (p, n, k) in [(2, 1, 2), (3, 1, 2), (2, 4, 3), (3, 3, 2), (5, 2, 2)] {
            let r = GaloisRing::new(p, n, k).unwrap();
            for a in r.elements().step_by(7) {
                assert_eq!(r.sigma_pow(&a, k), a);
                assert_eq!(r.sigma(&r.mul(&a, &a)), r.mul(&r.sigma(&a), &r.sigma(&a)));
            }
            let fixed = r.elements().filter(|a| r.sigma(a) == *a).count() as u128;
            assert_eq!(fixed, r.base_modulus());
        }
    }

    #[test]
    fn frobenius_reduces_to_pth_power() {
        let r = GaloisRing::new(2, 3, 2).unwrap();
        for a in r.elements() {
            let s = r.sigma(&a);
            let q = r.pow(&a, 2);
            assert!(s.0.iter().zip(&q.0).all(|(x, y)| (x + 8 - y) % 2 == 0));
        }
    }

    #[test]
    fn inverses() {
        let r = GaloisRing::new(2, 5, 2).unwrap();
        for a in r.elements().filter(|a| r.is_unit(a)) {
            assert_eq!(r.mul(&a, &r.inverse(&a).unwrap()), r.one());
        }
        assert_eq!(r.inverse(&r.from_base(2)), Err(CyclicError::NotAUnit));
    }
}
