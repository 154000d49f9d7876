//! Descent along `KO_p -> KU_p`: the Picard spectral sequence of the `C_2`
//! action, the homotopy of `KO_2`, and the locally trivial Brauer group.

use crate::cohomology::{marked, procyclic_cohomology, tate_hat_zero, FactorKind, GAction, GroupSpec};
use crate::fgab::local::{free_modulus, kernel, GenOrder};
use crate::fgab::{assemble_extension, ExtensionClass, FgModule, IntMatrix};
use crate::height1::{
    adams_row, entry_from_e2, generator_index, ku_picard_row, unit_vector, Outcome, Readout, Result, ScenarioError,
    ScenarioFile,
};
use crate::sseq::{Bidegree, Permanence, Provenance, ProvenanceTag, ScriptEntry, Vanishing, Window, ZeroRegion};

fn b(s: usize, t: i64) -> Bidegree {
    Bidegree::new(s, t)
}

pub(crate) fn c2() -> GroupSpec {
    GroupSpec::single(FactorKind::FiniteCyclic(2), "-1")
}

fn permanent_at(s: usize, t: i64, from_page: usize, source: &str) -> Permanence {
    Permanence { stem: None, at: Some(b(s, t)), from_page, source: source.into() }
}

const KO_D2: &str = "d_2 on H^1(C_2, Pic KU_p) = Z/2 is nonzero in the C_2 descent spectral sequence for Pic(KO_p)";
const KO_D3: &str = "d_3 on the class of -1 in H^2(C_2, (pi_0 KU_2)^x) is nonzero for Pic(KO_2)";

/// `Pic(KO_p)` from `Pic(KU_p)` by `C_2` descent: `ko2` at `p = 2`, `kop:p` otherwise.
pub fn ko_picard(p: u64, precision: u32) -> Result<ScenarioFile> {
    let group = c2();
    let gens = [free_modulus(p) - 1];
    let name = if p == 2 { "ko2".to_string() } else { format!("kop:{p}") };
    let mut file = ScenarioFile::new(&name, p, precision, Window::new(9, 0, 10), &group);
    file.fill_rows(&|t| Ok(ku_picard_row(p, precision, &group, &gens, t)?.map(|a| (a, ku_note(t)))))?;
    let e2 = file.page(2)?;
    let torsion_unit = if p == 2 { "(3)[-1]" } else { "(3)[w]" };
    let target = generator_index(&e2, b(3, 1), torsion_unit)?;
    let width = e2.module(b(3, 1)).map_or(0, |m| m.len());
    file.script.push(entry_from_e2(
        &e2,
        b(1, 0),
        &[unit_vector(width, target)],
        Provenance::new(ProvenanceTag::Declared, KO_D2),
    )?);
    file.fact(KO_D2, "d_2: E_2^{1,0} = Z/2 -> E_2^{3,1} = Z/2 is an isomorphism");
    file.fact("relative Brauer classes agree with Br'", "Br(KO_p | KU_p) = Br'(KO_p | KU_p)");
    let d = &mut file.declarations;
    d.zero_below_t = Some(0);
    d.permanent.push(permanent_at(0, 0, 2, "the unit class of Pic(KO_p) is a permanent cycle"));
    if p == 2 {
        let e3 = file.page(3)?;
        let src = e3.module(b(2, 1)).expect("in window").len();
        let tgt = e3.module(b(5, 3)).expect("in window").len();
        let minus_one = generator_index(&e3, b(2, 1), "(2)[-1]")?;
        let images: Vec<Vec<i128>> =
            (0..src).map(|i| if i == minus_one { unit_vector(tgt, 0) } else { vec![0; tgt] }).collect();
        file.script.push(entry_from_e2(&e3, b(2, 1), &images, Provenance::new(ProvenanceTag::Declared, KO_D3))?);
        file.fact(KO_D3, "d_3: E_3^{2,1} -> E_3^{5,3} sends the class of -1 to the generator");
        let zero_stem = "the 0-stem of the Picard spectral sequence for KO_2 consists of permanent cycles";
        let survivors = "the surviving (-1)-stem classes of Pic(KO_2) are permanent";
        let d = &mut file.declarations;
        d.permanent.push(permanent_at(1, 1, 2, zero_stem));
        d.permanent.push(permanent_at(3, 3, 2, zero_stem));
        d.permanent.push(permanent_at(2, 1, 4, survivors));
        d.permanent.push(permanent_at(6, 5, 2, survivors));
        d.vanishing.push(Vanishing { stem: -1, above: 6, source: "Br(KO_2|KU_2) has classes in filtration at most 6".into() });
        file.fact(zero_stem, "d_r = 0 on E_r^{s,s} for Pic(KO_2)");
        file.fact(survivors, "d_r = 0 on E_r^{2,1} for r >= 4 and on E_r^{6,5} for r >= 2");
        file.fact("Br(KO_2|KU_2) has classes in filtration at most 6", "E_inf^{s,s-1} = 0 for s > 6");
        file.readouts.push(Readout {
            name: "Br(KO_2|KU_2)".into(),
            stem: -1,
            assemble: false,
            relations: Vec::new(),
            generators: Vec::new(),
            expected: Some("graded Z/2 | Z/2".into()),
        });
    } else {
        let d = &mut file.declarations;
        d.permanent.push(Permanence { stem: Some(0), at: None, from_page: 2, source: "Pic(KO_p) is algebraic".into() });
        d.zero_regions.push(ZeroRegion {
            s_min: 1,
            t_min: 2,
            t_max: None,
            source: "2 is invertible in pi_* KU_p, so H^s(C_2, pi_{2k} KU_p) = 0 for s >= 1".into(),
        });
        file.fact("Pic(KO_p) is algebraic", "d_r = 0 on E_r^{s,s}");
        file.readouts.push(Readout {
            name: format!("Br(KO_{p}|KU_{p})"),
            stem: -1,
            assemble: true,
            relations: Vec::new(),
            generators: Vec::new(),
            expected: Some("Z/2".into()),
        });
    }
    Ok(file)
}

pub(crate) fn ku_note(t: i64) -> &'static str {
    match t {
        0 => "Pic(KU_p) = Z/2",
        1 => "(pi_0 KU_p)^x",
        _ => "pi_{t-1} KU_p with Adams operations",
    }
}

/// The completion map into `Br(KO_p|KU_p)` vanishes when nothing of the
/// stem survives in filtration `integral_filtration` or above.
#[derive(Clone, Debug)]
pub struct CompletionCheck {
    pub tate: FgModule,
    pub generator_filtration: usize,
    pub integral_filtration: usize,
    pub map_is_zero: bool,
}

pub fn kop_completion(p: u64, outcome: &Outcome) -> Result<CompletionCheck> {
    let mu = GAction::trivial(c2(), marked(p, outcome.e2.page.precision(), &[(GenOrder::Finite(p as u128 - 1), "w")]));
    let tate = tate_hat_zero(2, &mu)?.structure()?;
    let r = outcome
        .readouts
        .first()
        .ok_or_else(|| ScenarioError::Invalid("kop scenario has no readout".into()))?;
    let generator_filtration = r.pieces.first().map(|x| x.at.s).ok_or_else(|| ScenarioError::Invalid("empty stem".into()))?;
    let integral_filtration = 6;
    let map_is_zero = r.pieces.iter().all(|x| x.at.s < integral_filtration);
    Ok(CompletionCheck { tate, generator_filtration, integral_filtration, map_is_zero })
}

/// `pi_* KO_2` from the `C_2` homotopy fixed point spectral sequence of `KU_2`.
pub fn ko_homotopy(precision: u32) -> Result<ScenarioFile> {
    let p = 2;
    let group = c2();
    let gens = [free_modulus(p) - 1];
    let mut file = ScenarioFile::new("ko-homotopy", p, precision, Window::new(5, 0, 12), &group);
    file.fill_rows(&|t| {
        if t < 0 || t % 2 != 0 {
            return Ok(None);
        }
        Ok(Some((adams_row(p, precision, &group, &gens, t as u64 / 2)?, "pi_t KU_2 with complex conjugation")))
    })?;
    let e2 = file.page(2)?;
    let d3 = "d_3(alpha^k eta^m) = k alpha^{k-1} eta^{m+3}";
    for (src, entry) in e2.entries() {
        let tgt = src.target(3);
        let Some(target) = e2.module(tgt) else { continue };
        if entry.is_zero() || target.is_empty() {
            continue;
        }
        // alpha^k eta^m sits in bidegree (m, 4k + 2m).
        let k = (src.t - 2 * src.s as i64).div_euclid(4);
        let coeff = k.rem_euclid(2) as i128;
        let matrix = vec![vec![coeff; target.len()]; entry.module().len()];
        file.script.push(ScriptEntry::new(3, src, matrix, Provenance::new(ProvenanceTag::Declared, d3)));
    }
    file.fact(d3, "d_3(u^2) = eta^3 in H^*(C_2, pi_* KU_2) = Z_2[u^{+-2}, eta]/(2 eta)");
    let d = &mut file.declarations;
    d.permanent.push(Permanence { stem: None, at: None, from_page: 4, source: "E_4 = E_inf".into() });
    for stem in 0..8 {
        d.vanishing.push(Vanishing { stem, above: 2, source: "E_4^{s,t} = 0 for s >= 3".into() });
    }
    file.fact("E_4 = E_inf with a horizontal vanishing line", "E_4^{s,t} = 0 for s >= 3");
    let expected = ["Z_2", "Z/2", "Z/2", "0", "Z_2", "0", "0", "0"];
    for (n, e) in expected.iter().enumerate() {
        file.readouts.push(Readout {
            name: format!("pi_{n} KO_2"),
            stem: n as i64,
            assemble: true,
            relations: Vec::new(),
            generators: Vec::new(),
            expected: Some(e.to_string()),
        });
    }
    Ok(file)
}

/// The locally trivial Brauer groups of `KO_2` and `KU_2` and the kernel between them.
#[derive(Clone, Debug)]
pub struct LbrRoute {
    pub lbr_ko: FgModule,
    pub lbr_ku: FgModule,
    /// Kernels of the homomorphisms `LBr(KO_2) -> LBr(KU_2)`.
    pub candidates: Vec<FgModule>,
    pub bound: u128,
    pub result: FgModule,
    /// The nontrivial extension of `Z/2` by `Z/2`.
    pub cross_check: FgModule,
}

/// `LBr = H^1(Zhat, i^* pi_0 pic)` with the declared stalks `Z/8` and `Z/2`,
/// then the kernel of base change allowed by the order `bound`.
pub fn ko2_lbr_route(precision: u32, bound: u128) -> Result<LbrRoute> {
    let hat = GroupSpec::single(FactorKind::ProcyclicHat, "Frob");
    let stalk = |n: u128, label: &str| GAction::trivial(hat.clone(), marked(2, precision, &[(GenOrder::Finite(n), label)]));
    let ko = stalk(8, "(KO_2, SKO_2)");
    let ku = stalk(2, "(KU_2, SKU_2)");
    let lbr_ko = procyclic_cohomology(&ko, 1)?[1].clone();
    let lbr_ku = procyclic_cohomology(&ku, 1)?[1].clone();
    let mut candidates = Vec::new();
    for image in 0..2 {
        let f = IntMatrix::from_rows(1, vec![vec![image]])?;
        let k = kernel(ko.module(), &f, ku.module())?.structure()?;
        if !candidates.contains(&k) {
            candidates.push(k);
        }
    }
    let fitting: Vec<&FgModule> = candidates.iter().filter(|c| c.order().map_or(false, |o| o <= bound)).collect();
    let [result] = fitting.as_slice() else {
        return Err(ScenarioError::Invalid(format!("{} candidates fit the bound {bound}", fitting.len())));
    };
    let z2 = FgModule::cyclic(2, precision, 2)?;
    let cross_check = assemble_extension(&ExtensionClass::cyclic(z2.clone(), z2, 1)?)?;
    Ok(LbrRoute { lbr_ko, lbr_ku, result: (*result).clone(), candidates, bound, cross_check })
}
