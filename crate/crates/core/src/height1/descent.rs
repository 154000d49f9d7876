//! Iterated descent for `Br'(Sp_K | KU_2)` through `KO_2` and `KO_2^nr`, and the
//! Frobenius cohomology of Witt vector units at finite level.

use std::collections::BTreeSet;

use crate::arith::powmod;
use crate::cohomology::{h1_as_coinvariants, marked, Coinvariants, FactorKind, GAction, GroupSpec};
use crate::cyclic::{h1_brauer_label, GaloisRing, GrElem};
use crate::fgab::local::{free_modulus, kernel, GenOrder, MarkedModule};
use crate::height1::{ko_homotopy, units_module, Readout, Result, ScenarioError, ScenarioFile};
use crate::sseq::{ExtensionRelation, Provenance, ProvenanceTag, Window, ZeroRegion};
use crate::Matrix;

pub const KO_CLASS: &str = "(KO_2, \u{3a3}KO_2)";
pub const KO_NR_CLASS: &str = "(KO_2^nr, \u{3a3}^2KO_2^nr)";

fn z2_5() -> GroupSpec {
    GroupSpec::single(FactorKind::Procyclic(2), "5")
}

/// `Br(KO_2 | KU_2)` with its Galois group `1 + 4Z_2`, indexed so that row `t`
/// holds `pi_t` of the Brauer sheaf: `Z/4`, then `Pic(KO_2) = Z/8`, then
/// `(pi_0 KO_2)^x`, then `pi_{t-2} KO_2`.
pub fn ko2_descent(precision: u32) -> Result<ScenarioFile> {
    let p = 2;
    let group = z2_5();
    let homotopy = ko_homotopy(precision)?.run_at(precision)?;
    let mut file = ScenarioFile::new("ko2-descent", p, precision, Window::new(1, 0, 6), &group);
    file.fill_rows(&|t| {
        let trivial = |n: u128, label: &str| GAction::trivial(group.clone(), marked(p, precision, &[(GenOrder::Finite(n), label)]));
        Ok(match t {
            0 => Some((trivial(4, KO_NR_CLASS), "Br(KO_2 | KU_2)^{1+4Z_2} = Z/4")),
            1 => Some((trivial(8, KO_CLASS), "Pic(KO_2) = Z/8")),
            2 => Some((GAction::trivial(group.clone(), units_module(p, precision)), "(pi_0 KO_2)^x = Z_2^x")),
            t if t >= 3 => {
                let n = t - 2;
                let r = homotopy
                    .readout(&format!("pi_{n} KO_2"))
                    .ok_or_else(|| ScenarioError::Invalid(format!("pi_{n} KO_2 is not computed")))?;
                let structure = r.assembly.as_ref().map(|a| a.total.clone()).expect("assembled");
                if structure.is_zero() {
                    None
                } else if structure.free_rank() == 1 && structure.torsion().is_empty() {
                    let module = marked(p, precision, &[(GenOrder::Free, &format!("v{n}"))]);
                    let act = Matrix::from_rows(1, vec![vec![powmod(5, n as u128 / 2, free_modulus(p)) as i128]])?;
                    Some((GAction::new(group.clone(), module, vec![act])?, "pi_{t-2} KO_2 with Adams operations"))
                } else {
                    let gens: Vec<(GenOrder, String)> =
                        structure.torsion().iter().map(|&o| (GenOrder::Finite(o), format!("pi{n}"))).collect();
                    let gens: Vec<(GenOrder, &str)> = gens.iter().map(|(o, l)| (*o, l.as_str())).collect();
                    Some((GAction::trivial(group.clone(), marked(p, precision, &gens)), "pi_{t-2} KO_2"))
                }
            }
            _ => None,
        })
    })?;
    file.declarations.cd = Some(1);
    file.fact("1 + 4Z_2 fixes Br(KO_2 | KU_2) = Z/4", "the Adams operation psi^5 acts trivially on the class (KO_2^nr, S^2 KO_2^nr)");
    file.fact("Z_2 has cohomological dimension one", "cd(Z_2) = 1, so E_2 = E_inf with two columns");
    file.fact("the extension of Z/4 by Z/8 in Br'(Sp_K | KU_2) is split", "Br'(Sp_K | KU_2) = Z/8 + Z/4");
    file.readouts.push(Readout {
        name: "Br'(Sp_K|KU_2)".into(),
        stem: 0,
        assemble: true,
        relations: Vec::new(),
        generators: Vec::new(),
        expected: Some("Z/8 + Z/4".into()),
    });
    let why = "8 (KO_2, S KO_2) = 4 [5] in Pic_1";
    file.fact(why, "Pic_1 = Z_2 + Z/4 + Z/2 at p = 2");
    file.readouts.push(Readout {
        name: "Pic_1".into(),
        stem: 1,
        assemble: true,
        relations: vec![ExtensionRelation {
            source: format!("(0)[{KO_CLASS}]"),
            target: vec![("(1)[5]".into(), 4)],
            provenance: Provenance::new(ProvenanceTag::Declared, why),
        }],
        generators: Vec::new(),
        expected: Some("Z_2 + Z/4 + Z/2".into()),
    });
    Ok(file)
}

/// `E_2^{1,1}` again as coinvariants of the trivial action on `Pic(KO_2)`.
pub fn ko2_coinvariants(precision: u32) -> Result<Coinvariants> {
    let act = GAction::trivial(z2_5(), marked(2, precision, &[(GenOrder::Finite(8), KO_CLASS)]));
    let label = |g: &[i128]| {
        h1_brauer_label(act.module(), &[1], "KO_2", g[0] as i64).map_or_else(|e| e.to_string(), |l| l.to_string())
    };
    Ok(h1_as_coinvariants(&act, &label)?)
}

/// `Br'(1_K | KO_2^nr)` from the action of `Z_2 x Zhat`.
pub fn ko2nr(precision: u32) -> Result<ScenarioFile> {
    let p = 2;
    let group = GroupSpec::new(vec![
        crate::cohomology::Factor::new(FactorKind::Procyclic(2), "5"),
        crate::cohomology::Factor::new(FactorKind::ProcyclicHat, "Frob"),
    ])?;
    let mut file = ScenarioFile::new("ko2nr", p, precision, Window::new(2, 0, 2), &group);
    file.fill_rows(&|t| {
        Ok((t == 1).then(|| {
            let m = marked(p, precision, &[(GenOrder::Finite(8), "(KO_2^nr, \u{3a3}KO_2^nr)")]);
            (GAction::trivial(group.clone(), m), "Pic(KO_2^nr) = Z/8")
        }))
    })?;
    let d = &mut file.declarations;
    d.zero_below_t = Some(1);
    d.cd = Some(2);
    let units = "H^2(Z_2 x Zhat, W(F_2-bar)^x) = 0";
    d.zero_regions.push(ZeroRegion { s_min: 2, t_min: 2, t_max: Some(2), source: units.into() });
    file.fact(units, "H^1(Zhat, W(F_2-bar)^x) = 0 by Hilbert 90 and H^1(Z_2, Z_2^x) lies in stem 1");
    file.fact("Br(KO_2^nr) has no class below Pic", "pi_0 of the Brauer sheaf of KO_2^nr vanishes");
    file.readouts.push(Readout {
        name: "Br'(1_K|KO_2^nr)".into(),
        stem: 0,
        assemble: true,
        relations: Vec::new(),
        generators: Vec::new(),
        expected: Some("Z/8 + Z/8".into()),
    });
    Ok(file)
}

/// `H^*(Z/n, GR(2^N, n)^x)` for the Frobenius, computed twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hilbert90 {
    pub n: usize,
    pub precision: u32,
    /// `|A^sigma|`, from the kernel of `sigma - 1` on `A` as a `Z/2^N`-module.
    pub fixed_ring: u128,
    /// `|H^0| = |(Z/2^N)^x|`.
    pub fixed_units: u128,
    /// `|N(A^x)|`, generated by norms of the Teichmuller generator and the `1 + 2^i x^j`.
    pub norms: u128,
    /// `|H^1| = |H^0-hat| = |A^x sigma| / |N A^x|`.
    pub h1: u128,
    /// `|ker N| / |im(sigma - 1)|` by enumeration, for small rings.
    pub h1_direct: Option<u128>,
}

const ENUMERATION_LIMIT: u128 = 1 << 12;

pub fn hilbert90(n: usize, precision: u32) -> Result<Hilbert90> {
    let ring = GaloisRing::new(2, precision, n).map_err(|e| ScenarioError::Invalid(e.to_string()))?;
    let m = ring.base_modulus();
    let coords = MarkedModule::new(2, precision, vec![GenOrder::Finite(m); n], (0..n).map(|j| format!("x^{j}")).collect())?;
    let sigma_minus_one: Vec<Vec<i128>> = ring
        .sigma_matrix()
        .iter()
        .enumerate()
        .map(|(j, row)| row.iter().enumerate().map(|(i, &c)| c as i128 - (i == j) as i128).collect())
        .collect();
    let fixed_ring = kernel(&coords, &Matrix::from_rows(n, sigma_minus_one)?, &coords)?
        .structure()?
        .order()
        .ok_or_else(|| ScenarioError::Invalid("fixed ring is infinite".into()))?;
    let fixed_units = fixed_ring / 2;

    let field_order = 1u128 << n;
    let teichmuller = ring
        .elements()
        .filter(|a| a.0.iter().any(|c| c % 2 == 1))
        .find(|a| crate::arith::factor(field_order - 1).iter().all(|&(q, _)| !congruent_one(&ring.pow(a, (field_order - 1) / q as u128))))
        .map(|a| (0..precision).fold(a, |acc, _| ring.pow(&acc, field_order)))
        .ok_or_else(|| ScenarioError::Invalid("no primitive residue".into()))?;
    let mut gens = vec![teichmuller];
    for i in 1..precision {
        for j in 0..n {
            let mut e = ring.zero();
            e.0[j] = 1u128 << i;
            gens.push(ring.add(&ring.one(), &e));
        }
    }
    let norm_gens: Vec<u128> = gens
        .iter()
        .map(|g| {
            let v = ring.norm(g);
            debug_assert!(ring.is_base(&v));
            v.0[0]
        })
        .collect();
    let norms = subgroup_size(&norm_gens, m);
    let h1 = fixed_units / norms;
    let h1_direct = (ring.size() <= ENUMERATION_LIMIT).then(|| direct_h1(&ring));
    Ok(Hilbert90 { n, precision, fixed_ring, fixed_units, norms, h1, h1_direct })
}

fn congruent_one(a: &GrElem) -> bool {
    a.0.iter().enumerate().all(|(j, c)| c % 2 == (j == 0) as u128)
}

/// Size of the subgroup of `(Z/m)^x` generated by `gens`.
fn subgroup_size(gens: &[u128], m: u128) -> u128 {
    let mut seen = BTreeSet::from([1u128]);
    let mut frontier = vec![1u128];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x * g % m;
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.len() as u128
}

fn direct_h1(ring: &GaloisRing) -> u128 {
    let units: Vec<GrElem> = ring.elements().filter(|a| ring.is_unit(a)).collect();
    let kernel = units.iter().filter(|a| ring.norm(a) == ring.one()).count() as u128;
    let image: BTreeSet<GrElem> =
        units.iter().map(|a| ring.mul(&ring.sigma(a), &ring.inverse(a).expect("unit"))).collect();
    kernel / image.len() as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroups() {
        assert_eq!(subgroup_size(&[3], 8), 2);
        assert_eq!(subgroup_size(&[3, 5], 8), 4);
        assert_eq!(subgroup_size(&[5], 64), 16);
    }

    #[test]
    fn small_hilbert90_two_ways() {
        for n in 1..=3 {
            for precision in 1..=4 {
                let h = hilbert90(n, precision).unwrap();
                assert_eq!(h.fixed_ring, 1 << precision);
                assert_eq!(h.h1, 1, "{h:?}");
                assert_eq!(h.h1_direct, if (n as u32) * precision <= 12 { Some(1) } else { None });
            }
        }
    }
}
