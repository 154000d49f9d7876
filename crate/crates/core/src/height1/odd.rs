//! `Br_1^0` and `Pic_1` at an odd prime from the descent spectral sequence of
//! `Z_p^x` acting on `KU_p`.

use crate::fgab::FgModule;
use crate::height1::ko::ku_note;
use crate::height1::{
    cochain_comparison, ko_picard, ku_picard_row, unit_generators, units_group, NamedClass, Readout, Rebase, Result,
    ScenarioError, ScenarioFile,
};
use crate::sseq::{transport_differential, Bidegree, Comparison, Permanence, Window, ZeroRegion};

/// The label of the generator of `Br_1^0` at an odd prime.
pub const ODD_GENERATOR: &str = "(KU_p^h(1+pZp), chi, omega)";

pub fn odd(p: u64, precision: u32) -> Result<ScenarioFile> {
    if p == 2 {
        return Err(ScenarioError::Invalid("odd requires an odd prime".into()));
    }
    let group = units_group(p);
    let gens = unit_generators(p);
    let mut file = ScenarioFile::new(&format!("odd:{p}"), p, precision, Window::new(4, 0, 5), &group);
    file.fill_rows(&|t| Ok(ku_picard_row(p, precision, &group, &gens, t)?.map(|a| (a, ku_note(t)))))?;

    let ko = ko_picard(p, precision)?;
    let d2 = ko
        .script
        .iter()
        .find(|e| e.page == 2 && e.source == Bidegree::new(1, 0))
        .ok_or_else(|| ScenarioError::Invalid("the C_2 scenario has no d_2 out of (1,0)".into()))?;
    let (s_e2, t_e2) = (ko.e2(precision)?, file.e2(precision)?);
    // C_{p-1} -> C_2 on the first factor.
    let embed = |m: &[usize]| vec![m[0], 0];
    let cmp = Comparison {
        at_source: cochain_comparison(&s_e2, &t_e2, d2.source, &embed)?,
        at_target: cochain_comparison(&s_e2, &t_e2, d2.target, &embed)?,
    };
    let transported = transport_differential(&s_e2.page, &t_e2.page, &cmp, d2)?;
    file.script.push(transported.complete(&[])?);
    file.fact(
        "inflation along Z_p^x -> C_2 is compatible with the descent spectral sequences for KO_p and the K(1)-local sphere",
        "Pic(KO_p) -> Pic_1 induces a map of spectral sequences H^s(C_2, pi_t pic KU_p) -> H^s(Z_p^x, pi_t pic KU_p)",
    );

    let d = &mut file.declarations;
    d.zero_below_t = Some(0);
    d.zero_regions.push(ZeroRegion {
        s_min: 2,
        t_min: 2,
        t_max: None,
        source: "H^s(Z_p^x, pi_{2k} KU_p) = 0 for s >= 2".into(),
    });
    d.permanent.push(Permanence { stem: Some(0), at: None, from_page: 2, source: "Pic_1 is algebraic at odd p".into() });
    file.fact("H^s(Z_p^x, pi_{2k} KU_p) = 0 for s >= 2", "cd_p(Z_p^x) = 1 and |C_{p-1}| is a unit");
    file.fact("Pic_1 is algebraic at odd p", "d_r = 0 on E_r^{s,s}");

    // Z/(p-1) splits into primary parts; the sum of their generators generates.
    let at = Bidegree::new(2, 1);
    let parts = t_e2.page.module(at).map_or(0, |m| m.len());
    file.rebase.push(Rebase { at, classes: vec![NamedClass { label: ODD_GENERATOR.into(), e2: vec![1; parts] }] });
    file.readouts.push(Readout {
        name: "Br_1^0".into(),
        stem: -1,
        assemble: true,
        relations: Vec::new(),
        generators: vec![ODD_GENERATOR.into()],
        expected: Some(format!("Z/{}", p - 1)),
    });
    let pic = FgModule::new(p, precision, 1, [(p - 1) as u128, 2])?;
    file.readouts.push(Readout {
        name: "Pic_1".into(),
        stem: 0,
        assemble: true,
        relations: Vec::new(),
        generators: Vec::new(),
        expected: Some(pic.to_string()),
    });
    Ok(file)
}
