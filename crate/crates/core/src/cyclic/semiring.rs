//! Matrices over the semiring `N[u, u^{-1}]`, where conjugation by powers of
//! the companion matrix is computed without subtraction.

use std::collections::BTreeMap;
use std::fmt;

/// A finite sum `sum n_i u^{t_i}` with `n_i > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent(pub BTreeMap<i64, u64>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn monomial(t: i64) -> Self {
        Laurent(BTreeMap::from([(t, 1)]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (&t, &n) in &other.0 {
            *out.entry(t).or_insert(0) += n;
        }
        Laurent(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (&s, &m) in &self.0 {
            for (&t, &n) in &other.0 {
                *out.entry(s + t).or_insert(0) += m * n;
            }
        }
        Laurent(out)
    }

    /// Zero, or a single monomial with coefficient one.
    pub fn is_zero_or_unit_monomial(&self) -> bool {
        self.is_zero() || (self.0.len() == 1 && self.0.values().all(|&n| n == 1))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(&t, &n)| {
                let mono = match t {
                    0 => String::new(),
                    1 => "u".into(),
                    _ => format!("u^{t}"),
                };
                match (n, mono.is_empty()) {
                    (1, true) => "1".into(),
                    (1, false) => mono,
                    (_, true) => n.to_string(),
                    (_, false) => format!("{n}{mono}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSemiringMatrix(pub Vec<Vec<Laurent>>);

impl LaurentSemiringMatrix {
    pub fn identity(k: usize) -> Self {
        LaurentSemiringMatrix(
            (0..k).map(|i| (0..k).map(|j| if i == j { Laurent::monomial(0) } else { Laurent::zero() }).collect()).collect(),
        )
    }

    pub fn elementary(k: usize, s: usize, t: usize) -> Self {
        let mut m = LaurentSemiringMatrix((0..k).map(|_| vec![Laurent::zero(); k]).collect());
        m.0[s][t] = Laurent::monomial(0);
        m
    }

    /// The companion matrix with `u` in the top right corner.
    pub fn companion(k: usize) -> Self {
        let mut m = LaurentSemiringMatrix((0..k).map(|_| vec![Laurent::zero(); k]).collect());
        for i in 1..k {
            m.0[i][i - 1] = Laurent::monomial(0);
        }
        m.0[0][k - 1] = m.0[0][k - 1].add(&Laurent::monomial(1));
        m
    }

    /// The inverse of the companion matrix, also free of subtraction.
    pub fn companion_inverse(k: usize) -> Self {
        let mut m = LaurentSemiringMatrix((0..k).map(|_| vec![Laurent::zero(); k]).collect());
        for i in 1..k {
            m.0[i - 1][i] = Laurent::monomial(0);
        }
        m.0[k - 1][0] = m.0[k - 1][0].add(&Laurent::monomial(-1));
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.0.len();
        LaurentSemiringMatrix(
            (0..k)
                .map(|i| {
                    (0..k).map(|j| (0..k).fold(Laurent::zero(), |acc, l| acc.add(&self.0[i][l].mul(&other.0[l][j])))).collect()
                })
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::identity(self.0.len()), |acc, _| acc.mul(self))
    }
}

/// `u~^j e_{st} u~^{-j} = sum a(s, t, s', t') e_{s't'}`.
#[derive(Clone, Debug)]
pub struct ConjugationTable {
    pub k: usize,
    pub j: usize,
    /// `images[(s, t)]` is the image of `e_{st}`, zero-based.
    pub images: BTreeMap<(usize, usize), LaurentSemiringMatrix>,
}

impl ConjugationTable {
    /// The nonzero coefficients of every image.
    pub fn coefficients(&self) -> impl Iterator<Item = &Laurent> {
        self.images.values().flat_map(|m| m.0.iter().flatten()).filter(|a| !a.is_zero())
    }

    pub fn all_zero_or_one(&self) -> bool {
        self.coefficients().all(Laurent::is_zero_or_unit_monomial)
    }
}

pub fn conjugation_semiring_coefficients(k: usize, j: usize) -> ConjugationTable {
    let left = LaurentSemiringMatrix::companion(k).pow(j);
    let right = LaurentSemiringMatrix::companion_inverse(k).pow(j);
    let images = (0..k)
        .flat_map(|s| (0..k).map(move |t| (s, t)))
        .map(|(s, t)| ((s, t), left.mul(&LaurentSemiringMatrix::elementary(k, s, t)).mul(&right)))
        .collect();
    ConjugationTable { k, j, images }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_is_exact() {
        for k in 1..=5 {
            let c = LaurentSemiringMatrix::companion(k);
            assert_eq!(c.mul(&LaurentSemiringMatrix::companion_inverse(k)), LaurentSemiringMatrix::identity(k));
        }
    }

    #[test]
    fn k2_j1_table() {
        let t = conjugation_semiring_coefficients(2, 1);
        let img = |s, u| t.images[&(s, u)].clone();
        assert_eq!(img(0, 0), LaurentSemiringMatrix::elementary(2, 1, 1));
        assert_eq!(img(1, 1), LaurentSemiringMatrix::elementary(2, 0, 0));
        assert_eq!(img(0, 1).0[1][0], Laurent::monomial(-1));
        assert_eq!(img(1, 0).0[0][1], Laurent::monomial(1));
        assert!(t.all_zero_or_one());
    }

    #[test]
    fn j0_is_identity() {
        let t = conjugation_semiring_coefficients(4, 0);
        for (&(s, u), m) in &t.images {
            assert_eq!(*m, LaurentSemiringMatrix::elementary(4, s, u));
        }
    }

    #[test]
    fn display() {
        assert_eq!(Laurent::monomial(-1).to_string(), "u^-1");
        assert_eq!(Laurent::monomial(0).add(&Laurent::monomial(0)).add(&Laurent::monomial(1)).to_string(), "2 + u");
    }
}
