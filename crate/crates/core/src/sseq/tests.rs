use super::*;
use crate::cohomology::marked;
use crate::fgab::local::GenOrder;
use crate::fgab::FgModule;

fn b(s: usize, t: i64) -> Bidegree {
    Bidegree::new(s, t)
}

fn declared(src: &str) -> Provenance {
    Provenance::new(ProvenanceTag::Declared, src)
}

fn toy() -> SseqPage {
    let mut page = SseqPage::new("toy", 2, 2, 8, Window::new(4, 0, 4));
    page.set_module(b(0, 0), marked(2, 8, &[(GenOrder::Finite(4), "a")])).unwrap();
    page.set_module(b(2, 1), marked(2, 8, &[(GenOrder::Finite(4), "b")])).unwrap();
    page.set_module(b(4, 2), marked(2, 8, &[(GenOrder::Finite(2), "c")])).unwrap();
    page
}

#[test]
fn turning_a_page_takes_homology() {
    let page = toy();
    let script = DifferentialScript::new(vec![ScriptEntry::new(2, b(0, 0), vec![vec![2]], declared("toy"))]);
    let e3 = turn_page(&page, &script).unwrap();
    assert_eq!(e3.r(), 3);
    assert_eq!(e3.structure(b(0, 0)).unwrap().unwrap().to_string(), "Z/2");
    assert_eq!(e3.structure(b(2, 1)).unwrap().unwrap().to_string(), "Z/2");
    assert_eq!(e3.structure(b(4, 2)).unwrap().unwrap().to_string(), "Z/2");
    let e = e3.entry(b(0, 0)).unwrap();
    assert_eq!(e.lift_to_e2(0).unwrap(), vec![2]);
    assert_eq!(e.from_e2(&[1]).unwrap(), None);
    assert_eq!(e.from_e2(&[2]).unwrap(), Some(vec![1]));
}

#[test]
fn mismatched_bidegree_is_rejected() {
    let mut e = ScriptEntry::new(2, b(0, 0), vec![vec![1]], declared("toy"));
    e.target = b(3, 1);
    let err = turn_page(&toy(), &DifferentialScript::new(vec![e])).unwrap_err();
    assert!(matches!(err, SseqError::BidegreeMismatch { page: 2, .. }));
}

#[test]
fn nonzero_composite_is_rejected() {
    let script = DifferentialScript::new(vec![
        ScriptEntry::new(2, b(0, 0), vec![vec![1]], declared("toy")),
        ScriptEntry::new(2, b(2, 1), vec![vec![1]], declared("toy")),
    ]);
    let err = turn_page(&toy(), &script).unwrap_err();
    assert_eq!(err, SseqError::DSquaredNonzero { page: 2, middle: b(2, 1) });
}

#[test]
fn composite_zero_passes() {
    let script = DifferentialScript::new(vec![
        ScriptEntry::new(2, b(0, 0), vec![vec![2]], declared("toy")),
        ScriptEntry::new(2, b(2, 1), vec![vec![1]], declared("toy")),
    ]);
    let e3 = turn_page(&toy(), &script).unwrap();
    assert_eq!(e3.structure(b(2, 1)).unwrap().unwrap().to_string(), "0");
    assert!(e3.module(b(4, 2)).unwrap().is_empty());
}

#[test]
fn quadratic_rule_needs_diagonal_bidegree() {
    let mut page = SseqPage::new("q", 3, 2, 8, Window::new(6, 0, 6));
    page.set_module(b(3, 3), marked(2, 8, &[(GenOrder::Finite(2), "x")])).unwrap();
    page.set_module(b(6, 5), marked(2, 8, &[(GenOrder::Finite(2), "y")])).unwrap();
    let rule = QuadraticRule { page: 3, at: b(3, 3), adams: vec![vec![1]], square: vec![vec![1]], source: "q".into() };
    let e = apply_quadratic_rule(&page, &rule).unwrap();
    assert_eq!(e.target, b(6, 5));
    assert_eq!(e.matrix, vec![vec![0]]);
    assert_eq!(e.provenance.tag, ProvenanceTag::Quadratic);
    let bad = QuadraticRule { at: b(3, 4), ..rule };
    assert!(matches!(apply_quadratic_rule(&page, &bad), Err(SseqError::WrongBidegree { .. })));
}

#[test]
fn transport_along_inclusion() {
    let w = Window::new(3, 0, 2);
    let mut s = SseqPage::new("s", 2, 5, 8, w);
    s.set_module(b(1, 0), marked(5, 8, &[(GenOrder::Finite(2), "x")])).unwrap();
    s.set_module(b(3, 1), marked(5, 8, &[(GenOrder::Finite(2), "y")])).unwrap();
    let mut t = SseqPage::new("t", 2, 5, 8, w);
    t.set_module(b(1, 0), marked(5, 8, &[(GenOrder::Finite(2), "x")])).unwrap();
    t.set_module(b(3, 1), marked(5, 8, &[(GenOrder::Finite(4), "w")])).unwrap();
    let cmp = Comparison {
        at_source: crate::Matrix::from_rows(1, vec![vec![1]]).unwrap(),
        at_target: crate::Matrix::from_rows(1, vec![vec![2]]).unwrap(),
    };
    let d = ScriptEntry::new(2, b(1, 0), vec![vec![1]], declared("s"));
    let out = transport_differential(&s, &t, &cmp, &d).unwrap();
    assert!(out.unconstrained.is_empty());
    assert_eq!(out.entry.matrix, vec![vec![2]]);
    assert_eq!(out.entry.provenance.tag, ProvenanceTag::Transported);
}

#[test]
fn transport_rejects_incompatible_comparison() {
    let w = Window::new(3, 0, 2);
    let mut s = SseqPage::new("s", 2, 2, 8, w);
    s.set_module(b(1, 0), marked(2, 8, &[(GenOrder::Finite(2), "x")])).unwrap();
    s.set_module(b(3, 1), marked(2, 8, &[(GenOrder::Finite(2), "y")])).unwrap();
    let mut t = SseqPage::new("t", 2, 2, 8, w);
    t.set_module(b(1, 0), marked(2, 8, &[(GenOrder::Finite(2), "x")])).unwrap();
    t.set_module(b(3, 1), marked(2, 8, &[(GenOrder::Finite(2), "y")])).unwrap();
    let cmp = Comparison {
        at_source: crate::Matrix::from_rows(1, vec![vec![0]]).unwrap(),
        at_target: crate::Matrix::from_rows(1, vec![vec![1]]).unwrap(),
    };
    let d = ScriptEntry::new(2, b(1, 0), vec![vec![1]], declared("s"));
    let err = transport_differential(&s, &t, &cmp, &d).unwrap_err();
    assert!(matches!(err, SseqError::IncompatibleComparison(_)));
}

fn piece(s: usize, t: i64, gens: &[(GenOrder, &str)]) -> StemPiece {
    let module = marked(2, 8, gens);
    StemPiece { at: b(s, t), structure: module.structure().unwrap(), module }
}

#[test]
fn nontrivial_extension_assembles() {
    let pieces = vec![
        piece(1, 0, &[(GenOrder::Finite(2), "x")]),
        piece(2, 1, &[(GenOrder::Finite(2), "y"), (GenOrder::Finite(2), "z")]),
        piece(6, 5, &[(GenOrder::Finite(2), "w")]),
    ];
    let rel = |src: &str, tgt: &str| ExtensionRelation {
        source: src.into(),
        target: vec![(tgt.into(), 1)],
        provenance: declared("toy"),
    };
    let a = assemble_stem(-1, pieces, vec![rel("x", "y"), rel("y", "w")]).unwrap();
    assert_eq!(a.total.to_string(), "Z/8 + Z/2");
    assert_eq!(a.filtration.iter().map(|m| m.to_string()).collect::<Vec<_>>(), ["Z/2", "Z/4 + Z/2", "Z/8 + Z/2"]);
}

#[test]
fn relation_into_lower_filtration_is_rejected() {
    let pieces = vec![piece(1, 0, &[(GenOrder::Finite(2), "x")]), piece(2, 1, &[(GenOrder::Finite(2), "y")])];
    let rel = ExtensionRelation { source: "y".into(), target: vec![("x".into(), 1)], provenance: declared("toy") };
    assert!(matches!(assemble_stem(-1, pieces, vec![rel]), Err(SseqError::InvalidClass(_))));
}

#[test]
fn free_extension() {
    let pieces = vec![
        piece(0, 1, &[(GenOrder::Finite(8), "g")]),
        piece(1, 2, &[(GenOrder::Free, "f"), (GenOrder::Finite(2), "e")]),
    ];
    let rel = ExtensionRelation { source: "g".into(), target: vec![("f".into(), 4)], provenance: declared("toy") };
    let a = assemble_stem(1, pieces, vec![rel]).unwrap();
    assert_eq!(a.total, FgModule::new(2, 8, 1, [4, 2]).unwrap());
    assert_eq!(a.total.to_string(), "Z_2 + Z/4 + Z/2");
}

#[test]
fn stem_reading_requires_justification() {
    let page = toy();
    let script = DifferentialScript::new(vec![ScriptEntry::new(2, b(0, 0), vec![vec![2]], declared("toy"))]);
    let mut decl = Declarations { zero_below_t: Some(0), cd: Some(4), ..Default::default() };
    let ss = SpectralSequence::run(page.clone(), script.clone(), decl.clone()).unwrap();
    let err = ss.read_stem(-1).unwrap_err();
    assert!(matches!(err, SseqError::Unresolved { .. }), "{err}");
    decl.permanent.push(Permanence { stem: Some(0), at: None, from_page: 3, source: "toy".into() });
    let ss = SpectralSequence::run(page.clone(), script.clone(), decl.clone()).unwrap();
    assert!(matches!(ss.read_stem(-1), Err(SseqError::Unresolved { page: 2, .. })));
    decl.permanent.push(Permanence { stem: Some(-1), at: None, from_page: 2, source: "toy".into() });
    let ss = SpectralSequence::run(page, script, decl).unwrap();
    let pieces = ss.read_stem(-1).unwrap();
    assert_eq!(pieces.len(), 1);
    assert_eq!(pieces[0].structure.to_string(), "Z/2");
    assert_eq!(ss.read_stem(0).unwrap().len(), 1);
}

#[test]
fn permanence_contradiction_is_rejected() {
    let script = DifferentialScript::new(vec![ScriptEntry::new(2, b(0, 0), vec![vec![1]], declared("toy"))]);
    let decl = Declarations {
        permanent: vec![Permanence { stem: Some(0), at: None, from_page: 2, source: "toy".into() }],
        ..Default::default()
    };
    assert!(SpectralSequence::run(toy(), script, decl).is_err());
}

#[test]
fn chart_round_trip() {
    let page = toy();
    let script = DifferentialScript::new(vec![ScriptEntry::new(2, b(0, 0), vec![vec![2]], declared("toy fact"))]);
    let text = emit_chart(&page, &script, ChartFormat::Text).unwrap();
    let parsed = parse_chart(&text).unwrap();
    assert!(parsed.page.same_structure(&page));
    assert_eq!(parsed.script, script);
    assert_eq!(emit_chart(&parsed.page, &parsed.script, ChartFormat::Text).unwrap(), text);
    let svg = emit_chart(&page, &script, ChartFormat::Svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    assert_eq!(svg, emit_chart(&page, &script, ChartFormat::Svg).unwrap());
}

#[test]
fn window_parses() {
    let w: Window = "s0..9,t0..10".parse().unwrap();
    assert_eq!(w, Window::new(9, 0, 10));
    assert_eq!(w.to_string(), "s0..9,t0..10");
    assert!("s1..9,t0..10".parse::<Window>().is_err());
}
