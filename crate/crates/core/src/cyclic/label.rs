//! Brauer classes `(E, X)` named by an extension and an invertible `E`-module.

use std::fmt;

use crate::arith::{gcd, lcm};
use crate::cyclic::{CyclicError, Result};
use crate::fgab::local::{GenOrder, MarkedModule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerLabel {
    pub extension: String,
    /// The suspension `X = S^m E` of the unit.
    pub suspension: i64,
    pub order: u128,
}

impl BrauerLabel {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

impl fmt::Display for BrauerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.extension;
        match self.suspension {
            0 => write!(f, "({e}, {e})"),
            1 => write!(f, "({e}, \u{3a3}{e})"),
            m => write!(f, "({e}, \u{3a3}^{m}{e})"),
        }
    }
}

/// The class `(E, S^m E)`, where `suspension_class` is the class of `S E` in the
/// coinvariants `pic` of the Picard group.
pub fn h1_brauer_label(pic: &MarkedModule, suspension_class: &[i128], extension: &str, m: i64) -> Result<BrauerLabel> {
    if suspension_class.len() != pic.len() {
        return Err(CyclicError::InvalidClass(format!("{} coordinates for a module on {}", suspension_class.len(), pic.len())));
    }
    let x = pic.reduce(&suspension_class.iter().map(|c| c * m as i128).collect::<Vec<_>>());
    let mut order = 1u128;
    for (xi, o) in x.iter().zip(pic.orders()) {
        match o {
            GenOrder::Finite(n) => order = lcm(order, n / gcd(*n, xi.unsigned_abs() % n)),
            GenOrder::Free if *xi != 0 => {
                return Err(CyclicError::InvalidClass("the class has infinite order".into()));
            }
            GenOrder::Free => {}
        }
    }
    Ok(BrauerLabel { extension: extension.to_string(), suspension: m, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::marked;

    #[test]
    fn ko_labels() {
        let z8 = marked(2, 16, &[(GenOrder::Finite(8), "S")]);
        let a = h1_brauer_label(&z8, &[1], "KO_2", 1).unwrap();
        assert_eq!((a.to_string().as_str(), a.order), ("(KO_2, \u{3a3}KO_2)", 8));
        let b = h1_brauer_label(&z8, &[1], "KO_2^nr", 2).unwrap();
        assert_eq!((b.to_string().as_str(), b.order), ("(KO_2^nr, \u{3a3}^2KO_2^nr)", 4));
        assert!(h1_brauer_label(&z8, &[1], "KO_2", 0).unwrap().is_trivial());
        assert!(h1_brauer_label(&z8, &[1, 0], "KO_2", 1).is_err());
    }
}
