//! `Br_1^0` at the prime 2 from the descent spectral sequence of `Z_2^x`
//! acting on `KU_2`, with differentials transported from `KO_2`.

use crate::height1::ko::ku_note;
use crate::height1::{
    cochain_comparison, ko_picard, ku_picard_row, page_comparison, unit_generators, units_group, NamedClass, Readout,
    Rebase, Result, ScenarioError, ScenarioFile,
};
use crate::sseq::{
    apply_quadratic_rule, transport_differential, Bidegree, Comparison, ExtensionRelation, Permanence, Provenance,
    ProvenanceTag, QuadraticRule, ScriptEntry, Vanishing, Window,
};
use crate::Matrix;

fn b(s: usize, t: i64) -> Bidegree {
    Bidegree::new(s, t)
}

fn permanent_at(s: usize, t: i64, from_page: usize, source: &str) -> Permanence {
    Permanence { stem: None, at: Some(b(s, t)), from_page, source: source.into() }
}

fn find(file: &ScenarioFile, page: usize, source: Bidegree) -> Result<&ScriptEntry> {
    file.script
        .iter()
        .find(|e| e.page == page && e.source == source)
        .ok_or_else(|| ScenarioError::Invalid(format!("{} has no d_{page} out of {source}", file.name)))
}

const INFLATION: &str =
    "inflation along Z_2^x -> C_2 is compatible with the descent spectral sequences for KO_2 and the K(1)-local sphere";
const SQUARE: &str = "d_3 on E_3^{3,3} is the sum of the Adams term and the squaring term, which agree";
const ADAMS: &str = "d_3 from (5,5) to (8,7) agrees with the Adams spectral sequence differential on pi_* of the K(1)-local sphere";
const BELOW: &str = "the unit and the 0-stem classes of Pic_1 are permanent";
const SURVIVE: &str = "the surviving (-1)-stem classes of the K(1)-local Picard spectral sequence are permanent";

pub fn p2(precision: u32) -> Result<ScenarioFile> {
    let p = 2;
    let group = units_group(p);
    let gens = unit_generators(p);
    let mut file = ScenarioFile::new("p2", p, precision, Window::new(9, 0, 10), &group);
    file.fill_rows(&|t| Ok(ku_picard_row(p, precision, &group, &gens, t)?.map(|a| (a, ku_note(t)))))?;

    let ko = ko_picard(p, precision)?;
    let (s_e2, t_e2) = (ko.e2(precision)?, file.e2(precision)?);
    // C_2 is the first factor of Z_2^x.
    let embed = |m: &[usize]| vec![m[0], 0];

    let d2 = find(&ko, 2, b(1, 0))?;
    let cmp = Comparison {
        at_source: cochain_comparison(&s_e2, &t_e2, d2.source, &embed)?,
        at_target: cochain_comparison(&s_e2, &t_e2, d2.target, &embed)?,
    };
    let transported = transport_differential(&s_e2.page, &t_e2.page, &cmp, d2)?;
    let width = t_e2.page.module(d2.target).map_or(0, |m| m.len());
    let fill: Vec<(usize, Vec<i128>)> = transported.unconstrained.iter().map(|&i| (i, vec![0; width])).collect();
    file.script.push(transported.complete(&fill)?);
    file.fact(INFLATION, "Pic(KO_2) -> Pic_1 induces H^s(C_2, pi_t pic KU_2) -> H^s(Z_2^x, pi_t pic KU_2) on E_r");
    file.fact(
        "d_2 vanishes on the class restricted from Z_2",
        "d_2((0,1)[pic]) = 0 in E_2^{3,1} of the K(1)-local Picard spectral sequence",
    );

    let (s3, t3) = (ko.page(3)?, file.page(3)?);
    file.script.push(apply_quadratic_rule(
        &t3,
        &QuadraticRule { page: 3, at: b(3, 3), adams: vec![vec![1]], square: vec![vec![1]], source: SQUARE.into() },
    )?);
    file.fact(SQUARE, "d_3(x) = Sq(x) + Adams(x) = 0 on E_3^{3,3}");

    let d3 = find(&ko, 3, b(2, 1))?;
    let at_source = page_comparison(&s3, &t3, d3.source, &cochain_comparison(&s_e2, &t_e2, d3.source, &embed)?)?;
    let cmp = Comparison { at_source, at_target: Matrix::from_rows(1, vec![vec![1]])? };
    let transported = transport_differential(&s3, &t3, &cmp, d3)?;
    let fill: Vec<(usize, Vec<i128>)> = transported.unconstrained.iter().map(|&i| (i, vec![0])).collect();
    file.script.push(transported.complete(&fill)?);
    file.fact(
        "the comparison is an isomorphism on E_3^{5,3}",
        "E_3^{5,3} = Z/2 on both sides and inflation sends generator to generator",
    );
    file.fact(
        "d_3 vanishes on the class from H^1(C_2) x H^1(Z_2)",
        "d_3((1,1)[-1]) = 0 in E_3^{5,3} of the K(1)-local Picard spectral sequence",
    );

    file.script.push(ScriptEntry::new(3, b(5, 5), vec![vec![1]], Provenance::new(ProvenanceTag::AdamsComparison, ADAMS)));
    file.fact(ADAMS, "d_3: E_3^{5,5} = Z/2 -> E_3^{8,7} = Z/2 is nonzero");

    let d = &mut file.declarations;
    d.zero_below_t = Some(0);
    for (s, t) in [(0, 0), (1, 1), (3, 3)] {
        d.permanent.push(permanent_at(s, t, 2, BELOW));
    }
    d.permanent.push(permanent_at(1, 0, 3, SURVIVE));
    d.permanent.push(permanent_at(2, 1, 4, SURVIVE));
    d.permanent.push(permanent_at(4, 3, 2, SURVIVE));
    d.permanent.push(permanent_at(6, 5, 2, SURVIVE));
    d.vanishing.push(Vanishing { stem: -1, above: 6, source: "Br_1^0 has classes in filtration at most 6".into() });
    file.fact(BELOW, "d_r = 0 on E_r^{0,0}, E_r^{1,1} and E_r^{3,3}");
    file.fact(SURVIVE, "d_r = 0 on E_r^{1,0} (r >= 3), E_r^{2,1} (r >= 4), E_r^{4,3} and E_r^{6,5}");
    file.fact("Br_1^0 has classes in filtration at most 6", "E_inf^{s,s-1} = 0 for s > 6");

    let class = |label: &str, e2: Vec<i64>| NamedClass { label: label.into(), e2 };
    file.rebase.push(Rebase { at: b(1, 0), classes: vec![class("Q_1", vec![0, 1])] });
    file.rebase.push(Rebase {
        at: b(2, 1),
        classes: vec![class("Q_2", vec![1, 0, 0]), class("q_2'", vec![0, 0, 1])],
    });
    file.rebase.push(Rebase { at: b(4, 3), classes: vec![class("q_4", vec![1])] });
    file.rebase.push(Rebase { at: b(6, 5), classes: vec![class("q_6", vec![1])] });

    let relation = |source: &str, target: &str, why: &str| ExtensionRelation {
        source: source.into(),
        target: vec![(target.into(), 1)],
        provenance: Provenance::new(ProvenanceTag::Declared, why),
    };
    let relations = vec![
        relation("Q_1", "q_2'", "2 Q_1 = q_2' in Br_1^0"),
        relation("q_2'", "q_4", "2 q_2' = q_4 in Br_1^0"),
        relation("Q_2", "q_6", "2 Q_2 = q_6 in Br_1^0"),
    ];
    for r in &relations {
        file.fact(&r.provenance.source, "hidden extension in the (-1)-stem");
    }
    file.readouts.push(Readout {
        name: "Br_1^0".into(),
        stem: -1,
        assemble: true,
        relations,
        generators: vec!["Q_1".into(), "Q_2".into()],
        expected: Some("Z/8 + Z/4".into()),
    });
    Ok(file)
}
