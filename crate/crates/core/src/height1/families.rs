use crate::arith::{least_primitive_root, powmod, teichmuller};
use crate::cohomology::{marked, Factor, FactorKind, GAction, GroupSpec};
use crate::fgab::local::{free_cap, free_modulus, GenOrder, MarkedModule};
use crate::sseq::Result;
use crate::Matrix;

/// `Z_p^x` as an abstract group: `C_{p-1} x Z_p`, or `C_2 x Z_2` at `p = 2`.
pub fn units_group(p: u64) -> GroupSpec {
    if p == 2 {
        GroupSpec::new(vec![
            Factor::new(FactorKind::FiniteCyclic(2), "-1"),
            Factor::new(FactorKind::Procyclic(2), "5"),
        ])
    } else {
        GroupSpec::new(vec![
            Factor::new(FactorKind::FiniteCyclic(p - 1), "w"),
            Factor::new(FactorKind::Procyclic(p), format!("1+{p}")),
        ])
    }
    .expect("two factors")
}

/// Topological generators of `Z_p^x` as p-adic integers at the free modulus.
pub fn unit_generators(p: u64) -> [u128; 2] {
    let m = free_modulus(p);
    if p == 2 {
        [m - 1, 5]
    } else {
        [teichmuller(least_primitive_root(p), p, free_cap(p)), 1 + p as u128]
    }
}

/// The units `Z_p^x` as a module: torsion generator first, then the free one.
pub fn units_module(p: u64, precision: u32) -> MarkedModule {
    if p == 2 {
        marked(2, precision, &[(GenOrder::Finite(2), "-1"), (GenOrder::Free, "5")])
    } else {
        let one_plus_p = format!("1+{p}");
        marked(p, precision, &[(GenOrder::Finite(p as u128 - 1), "w"), (GenOrder::Free, &one_plus_p)])
    }
}

fn scalar(x: u128) -> Matrix {
    Matrix::from_rows(1, vec![vec![x as i128]]).expect("1x1")
}

/// `pi_{2k} KU_p = Z_p` with each generator `a` of `group` acting by `a^k`.
pub fn adams_row(p: u64, precision: u32, group: &GroupSpec, gens: &[u128], k: u64) -> Result<GAction> {
    let m = free_modulus(p);
    let module = marked(p, precision, &[(GenOrder::Free, &format!("u{k}"))]);
    let acts = gens.iter().map(|&a| scalar(powmod(a, k as u128, m))).collect();
    Ok(GAction::new(group.clone(), module, acts)?)
}

/// Coefficients of the height-one Picard spectral sequence for `KU_p` over `group`,
/// whose generators act on `pi_0 KU_p` through the given units.
pub fn ku_picard_row(p: u64, precision: u32, group: &GroupSpec, gens: &[u128], t: i64) -> Result<Option<GAction>> {
    Ok(match t {
        0 => Some(GAction::trivial(group.clone(), marked(p, precision, &[(GenOrder::Finite(2), "pic")]))),
        1 => Some(GAction::trivial(group.clone(), units_module(p, precision))),
        t if t >= 3 && t % 2 == 1 => Some(adams_row(p, precision, group, gens, (t as u64 - 1) / 2)?),
        _ => None,
    })
}
