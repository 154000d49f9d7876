//! Companion matrices and cyclic algebras as fixed points of twisted matrix algebras.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclic::{CyclicError, GaloisRing, GrElem, Result};

/// A square matrix over a Galois ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMatrix(pub Vec<Vec<GrElem>>);

impl RingMatrix {
    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn identity(ring: &GaloisRing, k: usize) -> Self {
        Self::scalar(ring, &ring.one(), k)
    }

    pub fn scalar(ring: &GaloisRing, u: &GrElem, k: usize) -> Self {
        RingMatrix((0..k).map(|i| (0..k).map(|j| if i == j { u.clone() } else { ring.zero() }).collect()).collect())
    }

    pub fn mul(&self, ring: &GaloisRing, other: &Self) -> Self {
        let k = self.size();
        RingMatrix(
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| (0..k).fold(ring.zero(), |acc, l| ring.add(&acc, &ring.mul(&self.0[i][l], &other.0[l][j]))))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn pow(&self, ring: &GaloisRing, e: usize) -> Self {
        (0..e).fold(Self::identity(ring, self.size()), |acc, _| acc.mul(ring, self))
    }

    /// Entrywise Galois action.
    pub fn sigma(&self, ring: &GaloisRing) -> Self {
        RingMatrix(self.0.iter().map(|row| row.iter().map(|a| ring.sigma(a)).collect()).collect())
    }

    /// Coordinates over the base ring, entry by entry.
    pub fn flatten(&self) -> Vec<u128> {
        self.0.iter().flat_map(|row| row.iter().flat_map(|a| a.0.iter().copied())).collect()
    }

    pub fn unflatten(ring: &GaloisRing, k: usize, v: &[u128]) -> Self {
        let d = ring.degree();
        RingMatrix((0..k).map(|i| (0..k).map(|j| GrElem(v[(i * k + j) * d..(i * k + j + 1) * d].to_vec())).collect()).collect())
    }
}

/// `u` in the top right corner and ones on the subdiagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionMatrix {
    pub k: usize,
    pub u: GrElem,
    pub matrix: RingMatrix,
    pub inverse: RingMatrix,
}

pub fn companion_matrix(ring: &GaloisRing, u: &GrElem, k: usize) -> Result<CompanionMatrix> {
    if k == 0 {
        return Err(CyclicError::Ring("companion matrices need k >= 1".into()));
    }
    let u_inv = ring.inverse(u)?;
    let mut m = RingMatrix::scalar(ring, &ring.zero(), k);
    let mut inv = m.clone();
    for i in 1..k {
        m.0[i][i - 1] = ring.one();
        inv.0[i - 1][i] = ring.one();
    }
    m.0[0][k - 1] = ring.add(&m.0[0][k - 1], u);
    inv.0[k - 1][0] = ring.add(&inv.0[k - 1][0], &u_inv);
    if m.pow(ring, k) != RingMatrix::scalar(ring, u, k) || m.mul(ring, &inv) != RingMatrix::identity(ring, k) {
        return Err(CyclicError::Ring("companion matrix identities fail".into()));
    }
    Ok(CompanionMatrix { k, u: u.clone(), matrix: m, inverse: inv })
}

/// Row reduction over `F_p`: the reduced rows and their pivot columns.
fn row_reduce(rows: &[Vec<u128>], p: u128) -> (Vec<Vec<u128>>, Vec<usize>) {
    let mut m: Vec<Vec<u128>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, i);
        let inv = crate::arith::invmod(m[r][c], p).expect("field");
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

fn rank_mod_p(rows: &[Vec<u128>], p: u128) -> usize {
    row_reduce(rows, p).1.len()
}

/// Basis of `{x : x A = 0}` for the matrix `A` given by its rows.
fn left_nullspace(rows: &[Vec<u128>], p: u128) -> Vec<Vec<u128>> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    // Columns of A become equations in x.
    let eqs: Vec<Vec<u128>> = (0..cols).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
    let (red, pivots) = row_reduce(&eqs, p);
    (0..n)
        .filter(|f| !pivots.contains(f))
        .map(|f| {
            let mut v = vec![0u128; n];
            v[f] = 1;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Coordinates of `v` in the span of independent `basis` vectors.
fn coordinates(basis: &[Vec<u128>], v: &[u128], p: u128) -> Option<Vec<u128>> {
    let n = basis.len();
    // Solve sum c_i b_i = v via the augmented system.
    let eqs: Vec<Vec<u128>> = (0..v.len()).map(|c| basis.iter().map(|b| b[c]).chain([v[c] % p]).collect()).collect();
    let (red, pivots) = row_reduce(&eqs, p);
    if pivots.contains(&n) {
        return None;
    }
    let mut c = vec![0u128; n];
    for (row, &pc) in red.iter().zip(&pivots) {
        c[pc] = row[n];
    }
    Some(c)
}

/// The fixed points of `sigma . X = u~ sigma(X) u~^{-1}` on `M_k(A)`, a central
/// simple algebra over the prime field with its structure constants.
#[derive(Clone, Debug)]
pub struct TwistedMatrixAlgebra {
    pub ring: GaloisRing,
    pub u: GrElem,
    pub k: usize,
    pub basis: Vec<RingMatrix>,
    /// `b_i b_j = sum_l c[i][j][l] b_l`.
    pub structure: Vec<Vec<Vec<u128>>>,
    pub unit: Vec<u128>,
    pub center_dimension: usize,
    /// A rank-one idempotent, when one exists.
    pub idempotent: Option<Vec<u128>>,
}

const RANDOM_TRIES: usize = 4096;
const EXHAUSTIVE_LIMIT: u128 = 6561;

pub fn twisted_fixed_algebra(ring: &GaloisRing, u: &GrElem) -> Result<TwistedMatrixAlgebra> {
    if !ring.is_field() || !ring.is_base(u) {
        return Err(CyclicError::NotAField(format!("{ring} over its prime field with u in the base")));
    }
    let p = ring.p() as u128;
    let k = ring.degree();
    let c = companion_matrix(ring, u, k)?;
    let dim = k * k * k;
    let twist = |x: &RingMatrix| c.matrix.mul(ring, &x.sigma(ring)).mul(ring, &c.inverse);
    // Rows of T - 1 on the standard basis of M_k(A) over F_p.
    let rows: Vec<Vec<u128>> = (0..dim)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = 1;
            let t = twist(&RingMatrix::unflatten(ring, k, &e)).flatten();
            t.iter().zip(&e).map(|(a, b)| (a + p - b) % p).collect()
        })
        .collect();
    let fixed = left_nullspace(&rows, p);
    if fixed.len() != k * k {
        return Err(CyclicError::RankMismatch { expected: k * k, found: fixed.len() });
    }
    let basis: Vec<RingMatrix> = fixed.iter().map(|v| RingMatrix::unflatten(ring, k, v)).collect();
    let mut structure = Vec::new();
    for a in &basis {
        let mut row = Vec::new();
        for b in &basis {
            let prod = a.mul(ring, b).flatten();
            row.push(coordinates(&fixed, &prod, p).ok_or_else(|| CyclicError::Ring("fixed points are not closed".into()))?);
        }
        structure.push(row);
    }
    let unit = coordinates(&fixed, &RingMatrix::identity(ring, k).flatten(), p)
        .ok_or_else(|| CyclicError::Ring("identity is not fixed".into()))?;
    let mut alg = TwistedMatrixAlgebra {
        ring: ring.clone(),
        u: u.clone(),
        k,
        basis,
        structure,
        unit,
        center_dimension: 0,
        idempotent: None,
    };
    if !alg.is_associative() {
        return Err(CyclicError::Ring("structure constants are not associative".into()));
    }
    alg.center_dimension = alg.center_dimension_by_nullspace();
    if alg.center_dimension != 1 {
        return Err(CyclicError::CenterTooLarge(alg.center_dimension));
    }
    if let Some(size) = alg.size().filter(|&s| s <= EXHAUSTIVE_LIMIT) {
        let central = (0..size).map(|i| alg.element(i)).filter(|z| alg.is_central(z)).count() as u128;
        if central != p {
            return Err(CyclicError::CenterTooLarge(central as usize));
        }
    }
    alg.idempotent = alg.find_rank_one_idempotent();
    Ok(alg)
}

impl TwistedMatrixAlgebra {
    fn p(&self) -> u128 {
        self.ring.p() as u128
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> Option<u128> {
        (self.p()).checked_pow(self.rank() as u32)
    }

    pub fn element(&self, mut i: u128) -> Vec<u128> {
        (0..self.rank())
            .map(|_| {
                let d = i % self.p();
                i /= self.p();
                d
            })
            .collect()
    }

    pub fn mul(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let p = self.p();
        let mut out = vec![0u128; self.rank()];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
                let c = x * y % p;
                for (o, s) in out.iter_mut().zip(&self.structure[i][j]) {
                    *o = (*o + c * s) % p;
                }
            }
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        let n = self.rank();
        let e = |i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|l| self.mul(&self.mul(&e(i), &e(j)), &e(l)) == self.mul(&e(i), &self.mul(&e(j), &e(l))))
            })
        }) && (0..n).all(|i| self.mul(&self.unit, &e(i)) == e(i) && self.mul(&e(i), &self.unit) == e(i))
    }

    pub fn is_central(&self, z: &[u128]) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            self.mul(z, &e) == self.mul(&e, z)
        })
    }

    fn center_dimension_by_nullspace(&self) -> usize {
        let p = self.p();
        let n = self.rank();
        // Row i: the coefficients of [b_i, b_j] for all j, l.
        let rows: Vec<Vec<u128>> = (0..n)
            .map(|i| {
                (0..n)
                    .flat_map(|j| (0..n).map(move |l| (i, j, l)))
                    .map(|(i, j, l)| (self.structure[i][j][l] + p - self.structure[j][i][l]) % p)
                    .collect()
            })
            .collect();
        left_nullspace(&rows, p).len()
    }

    /// `e^2 = e` with `B e` of dimension `k` over the prime field.
    pub fn is_rank_one_idempotent(&self, e: &[u128]) -> bool {
        if self.mul(e, e) != e {
            return false;
        }
        let n = self.rank();
        let rows: Vec<Vec<u128>> = (0..n)
            .map(|i| {
                let mut b = vec![0; n];
                b[i] = 1;
                self.mul(&b, e)
            })
            .collect();
        rank_mod_p(&rows, self.p()) == self.k
    }

    /// Seeded random search, then exhaustive search for small algebras.
    pub fn find_rank_one_idempotent(&self) -> Option<Vec<u128>> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1d);
        let p = self.p();
        for _ in 0..RANDOM_TRIES {
            let e: Vec<u128> = (0..self.rank()).map(|_| rng.gen_range(0..p)).collect();
            if self.is_rank_one_idempotent(&e) {
                return Some(e);
            }
        }
        let size = self.size().filter(|&s| s <= EXHAUSTIVE_LIMIT)?;
        (0..size).map(|i| self.element(i)).find(|e| self.is_rank_one_idempotent(e))
    }

    pub fn splits(&self) -> bool {
        self.idempotent.as_ref().map_or(false, |e| self.is_rank_one_idempotent(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_examples() {
        let f7 = GaloisRing::field(7, 1).unwrap();
        let c = companion_matrix(&f7, &f7.from_base(3), 3).unwrap();
        assert_eq!(c.matrix.pow(&f7, 3), RingMatrix::scalar(&f7, &f7.from_base(3), 3));
        let c1 = companion_matrix(&f7, &f7.from_base(5), 1).unwrap();
        assert_eq!(c1.matrix.0, vec![vec![f7.from_base(5)]]);
        let f3 = GaloisRing::field(3, 1).unwrap();
        let c2 = companion_matrix(&f3, &f3.from_base(2), 2).unwrap();
        assert_eq!(c2.matrix.0, vec![vec![f3.zero(), f3.from_base(2)], vec![f3.one(), f3.zero()]]);
        assert_eq!(companion_matrix(&f3, &f3.zero(), 2).err(), Some(CyclicError::NotAUnit));
    }

    #[test]
    fn nullspace_and_coordinates() {
        let rows = vec![vec![1, 2], vec![2, 4], vec![0, 1]];
        let ns = left_nullspace(&rows, 5);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        for c in 0..2 {
            assert_eq!((0..3).map(|i| v[i] * rows[i][c]).sum::<u128>() % 5, 0);
        }
        assert_eq!(coordinates(&[vec![1, 0, 1], vec![0, 1, 1]], &[2, 3, 0], 5), Some(vec![2, 3]));
        assert_eq!(coordinates(&[vec![1, 0, 1]], &[0, 1, 0], 5), None);
    }

    #[test]
    fn untwisted_f4_is_m2_f2() {
        let f4 = GaloisRing::field(2, 2).unwrap();
        let a = twisted_fixed_algebra(&f4, &f4.one()).unwrap();
        assert_eq!(a.rank(), 4);
        assert_eq!(a.center_dimension, 1);
        assert!(a.splits());
    }

    #[test]
    fn cubic_extension_has_rank_nine() {
        let f8 = GaloisRing::field(2, 3).unwrap();
        let a = twisted_fixed_algebra(&f8, &f8.one()).unwrap();
        assert_eq!(a.rank(), 9);
        assert_eq!(a.center_dimension, 1);
    }
}
