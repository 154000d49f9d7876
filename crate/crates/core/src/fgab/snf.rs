use crate::fgab::matrix::IntMatrix;
use crate::fgab::module::FgModule;
use crate::fgab::FgabError;
use crate::scalar::Scalar;

/// Smith normal form `u * m * v = d` with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Snf<T: Scalar> {
    pub d: IntMatrix<T>,
    pub u: IntMatrix<T>,
    pub v: IntMatrix<T>,
}

impl<T: Scalar> Snf<T> {
    /// Nonzero diagonal entries (the invariant factors, units included).
    pub fn invariant_factors(&self) -> Vec<T> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn ext_gcd<T: Scalar>(a: T, b: T) -> Result<(T, T, T), FgabError> {
    // Returns (g, s, t) with s*a + t*b = g > 0.
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (T::one(), T::zero());
    let (mut old_t, mut t) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r / r;
        let nr = old_r.checked_sub(&q.checked_mul(&r).ok_or(FgabError::Overflow)?).ok_or(FgabError::Overflow)?;
        old_r = r;
        r = nr;
        let ns = old_s.checked_sub(&q.checked_mul(&s).ok_or(FgabError::Overflow)?).ok_or(FgabError::Overflow)?;
        old_s = s;
        s = ns;
        let nt = old_t.checked_sub(&q.checked_mul(&t).ok_or(FgabError::Overflow)?).ok_or(FgabError::Overflow)?;
        old_t = t;
        t = nt;
    }
    if old_r < T::zero() {
        Ok((-old_r, -old_s, -old_t))
    } else {
        Ok((old_r, old_s, old_t))
    }
}

/// Smith normal form over the integers.
///
/// The only failure mode is intermediate overflow of the scalar type.
pub fn smith_normal_form<T: Scalar>(m: &IntMatrix<T>) -> Result<Snf<T>, FgabError> {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let zero = T::zero();
    let one = T::one();
    for t in 0..r.min(c) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = a.get(i, j);
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            for i in t + 1..r {
                let x = a.get(t, t);
                let y = a.get(i, t);
                if y.is_zero() {
                    continue;
                }
                let coeffs = if (y % x).is_zero() {
                    [one, zero, -(y / x), one]
                } else {
                    let (g, s, k) = ext_gcd(x, y)?;
                    [s, k, -(y / g), x / g]
                };
                a.combine_rows(t, i, coeffs)?;
                u.combine_rows(t, i, coeffs)?;
            }
            for j in t + 1..c {
                let x = a.get(t, t);
                let y = a.get(t, j);
                if y.is_zero() {
                    continue;
                }
                let coeffs = if (y % x).is_zero() {
                    [one, zero, -(y / x), one]
                } else {
                    let (g, s, k) = ext_gcd(x, y)?;
                    [s, k, -(y / g), x / g]
                };
                a.combine_cols(t, j, coeffs)?;
                v.combine_cols(t, j, coeffs)?;
            }
            if (t + 1..r).any(|i| !a.get(i, t).is_zero()) {
                continue;
            }
            let piv = a.get(t, t);
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(a.get(i, j) % piv).is_zero()));
            match bad {
                Some(i) => {
                    a.combine_rows(t, i, [one, one, zero, one])?;
                    u.combine_rows(t, i, [one, one, zero, one])?;
                }
                None => break,
            }
        }
        if a.get(t, t) < zero {
            a.combine_rows(t, t, [-one, zero, -one, zero])?;
            u.combine_rows(t, t, [-one, zero, -one, zero])?;
        }
    }
    Ok(Snf { d: a, u, v })
}

/// Invariant-factor decomposition of `Z^generators / rowspace(relations)`,
/// with free summands read as `Z_p` and torsion carried exactly.
pub fn cokernel<T: Scalar>(
    generators: usize,
    relations: &IntMatrix<T>,
    p: u64,
    precision: u32,
) -> Result<FgModule, FgabError> {
    if relations.rows() > 0 && relations.cols() != generators {
        return Err(FgabError::Dimension(format!(
            "relations have {} columns for {generators} generators",
            relations.cols()
        )));
    }
    let snf = smith_normal_form(relations)?;
    let factors = snf.invariant_factors();
    let free = generators - factors.len();
    let torsion: Vec<u128> = factors.iter().map(|x| x.as_i128() as u128).filter(|&x| x > 1).collect();
    FgModule::new(p, precision, free, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> IntMatrix<i64> {
        let c = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(c, rows).unwrap()
    }

    #[test]
    fn two_by_two() {
        let a = m(vec![vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.d.diagonal(), vec![2, 4]);
        assert_eq!(s.u.checked_mul(&a).unwrap().checked_mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn single_row() {
        let a = m(vec![vec![4, -8]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.d.diagonal(), vec![4]);
        assert_eq!(s.d.get(0, 1), 0);
    }

    #[test]
    fn empty_matrix() {
        let a: IntMatrix<i64> = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.rank(), 0);
        assert_eq!(s.v, IntMatrix::identity(3));
    }
}
