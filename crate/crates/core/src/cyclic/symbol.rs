//! Standard cyclic 2-cocycles and the symbols `beta(chi) u v`.

use crate::arith::{gcd, lcm};
use crate::cohomology::{
    bockstein, cocycles_cohomologous, cup_with_unit, tate_hat_zero, CocycleTable, FactorKind, FiniteGroup, GAction,
    GroupSpec,
};
use crate::cyclic::{CyclicError, GaloisRing, GrElem, Result};
use crate::fgab::local::{GenOrder, MarkedModule};
use crate::Matrix;

/// `c(s^i, s^j) = floor((i + j) / k) u`, written additively in `module`.
pub fn standard_cocycle(k: u64, module: &MarkedModule, action: &Matrix, u: &[i128]) -> Result<CocycleTable> {
    let n = k as usize;
    let values = (0..n * n)
        .map(|idx| {
            let carry = ((idx / n + idx % n) / n) as i128;
            module.reduce(&u.iter().map(|x| carry * x).collect::<Vec<_>>())
        })
        .collect();
    Ok(CocycleTable::new(FiniteGroup::cyclic(k), module.clone(), vec![action.clone()], 2, values)?)
}

fn exponent(module: &MarkedModule) -> u128 {
    module
        .orders()
        .iter()
        .map(|o| match o {
            GenOrder::Finite(n) => *n,
            GenOrder::Free => 1,
        })
        .fold(1, lcm)
}

fn scaled(c: &CocycleTable, m: i128) -> Result<CocycleTable> {
    let values = c.values.iter().map(|v| v.iter().map(|x| m * x).collect()).collect();
    Ok(CocycleTable::new(c.group.clone(), c.module.clone(), c.action.clone(), c.degree, values)?)
}

pub fn is_coboundary(c: &CocycleTable) -> Result<bool> {
    Ok(cocycles_cohomologous(c, &scaled(c, 0)?)?.is_some())
}

/// Order of the class of a cocycle, by testing its multiples.
pub fn class_order(c: &CocycleTable) -> Result<u128> {
    let bound = exponent(&c.module);
    for m in 1..=bound {
        if is_coboundary(&scaled(c, m as i128)?)? {
            return Ok(m);
        }
    }
    Err(CyclicError::InvalidClass("class order exceeds the exponent of the module".into()))
}

#[derive(Clone, Debug)]
pub struct SymbolDetection {
    pub cocycle: CocycleTable,
    pub nonzero: bool,
    pub order: u128,
}

/// `beta(chi) u v` for `chi: C_k -> Z/k` sending the generator to `chi`.
pub fn symbol_detect(k: u64, chi: u64, module: &MarkedModule, action: &Matrix, v: &[i128]) -> Result<SymbolDetection> {
    let group = FiniteGroup::cyclic(k);
    let beta = bockstein(&group, k, &[chi % k], exponent(module).max(2))?;
    let cocycle = cup_with_unit(&beta, module, std::slice::from_ref(action), v)?;
    let order = class_order(&cocycle)?;
    Ok(SymbolDetection { nonzero: order > 1, cocycle, order })
}

/// Whether `v` survives to `H^0-hat(C_k, M) = M^G / N M`.
pub fn tate_class_nonzero(k: u64, module: &MarkedModule, action: &Matrix, v: &[i128]) -> Result<bool> {
    let group = GroupSpec::single(FactorKind::FiniteCyclic(k), "s");
    let act = GAction::new(group, module.clone(), vec![action.clone()])?;
    Ok(!tate_hat_zero(k, &act)?.is_boundary(v)?)
}

/// `+1` when the standard cocycle of `u` is cohomologous to `beta(id) u u`, `-1`
/// when it is cohomologous to the negative, `None` when neither holds.
pub fn symbol_sign(k: u64, module: &MarkedModule, action: &Matrix, u: &[i128]) -> Result<Option<i8>> {
    let standard = standard_cocycle(k, module, action, u)?;
    let symbol = symbol_detect(k, 1, module, action, u)?.cocycle;
    if cocycles_cohomologous(&standard, &symbol)?.is_some() {
        return Ok(Some(1));
    }
    if cocycles_cohomologous(&standard, &scaled(&symbol, -1)?)?.is_some() {
        return Ok(Some(-1));
    }
    Ok(None)
}

/// The unit group of a finite field as `Z/(q - 1)` on a primitive element,
/// with Frobenius acting by multiplication by `p`.
#[derive(Clone, Debug)]
pub struct FieldUnits {
    pub field: GaloisRing,
    pub generator: GrElem,
    /// `powers[i] = generator^i`.
    pub powers: Vec<GrElem>,
}

impl FieldUnits {
    pub fn new(field: &GaloisRing) -> Result<Self> {
        if !field.is_field() {
            return Err(CyclicError::NotAField(field.to_string()));
        }
        let order = field.size() - 1;
        let generator = field
            .elements()
            .filter(|a| field.is_unit(a))
            .find(|a| {
                crate::arith::factor(order).iter().all(|&(q, _)| field.pow(a, order / q as u128) != field.one())
            })
            .ok_or_else(|| CyclicError::Ring("no primitive element".into()))?;
        let mut powers = vec![field.one()];
        for _ in 1..order {
            powers.push(field.mul(powers.last().expect("nonempty"), &generator));
        }
        Ok(FieldUnits { field: field.clone(), generator, powers })
    }

    pub fn order(&self) -> u128 {
        self.powers.len() as u128
    }

    pub fn log(&self, a: &GrElem) -> Result<u128> {
        self.powers.iter().position(|x| x == a).map(|i| i as u128).ok_or(CyclicError::NotAUnit)
    }

    pub fn module(&self) -> Result<MarkedModule> {
        let p = self.field.p();
        Ok(MarkedModule::new(p, 1, vec![GenOrder::Finite(self.order())], vec!["g".into()])?)
    }

    pub fn frobenius(&self) -> Matrix {
        Matrix::from_rows(1, vec![vec![self.field.p() as i128 % self.order().max(1) as i128]]).expect("1x1")
    }

    /// Order of `R^x / N(A^x)`.
    pub fn norm_quotient_order(&self) -> Result<u128> {
        let base = self.field.elements().filter(|a| self.field.is_unit(a) && self.field.is_base(a)).count() as u128;
        let mut norms: Vec<GrElem> = self.powers.iter().map(|a| self.field.norm(a)).collect();
        norms.sort();
        norms.dedup();
        Ok(base / norms.len() as u128)
    }
}

/// Order of `m` times a generator of `Z/n`.
pub fn multiple_order(n: u128, m: i128) -> u128 {
    n / gcd(n, m.unsigned_abs() % n.max(1))
}
