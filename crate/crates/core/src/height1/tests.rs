use super::*;

fn show(o: &Outcome) {
    for r in &o.readouts {
        println!("{} -> {} (expected {:?})", r.readout.name, r.rendered(), r.readout.expected);
    }
}

#[test]
fn ko2_stem_minus_one_has_order_four() {
    let file = ko_picard(2, 16).unwrap();
    let o = file.run().unwrap();
    show(&o);
    let r = o.readout("Br(KO_2|KU_2)").unwrap();
    assert_eq!(r.graded_order(), Some(4));
    assert!(o.matches());
}

#[test]
fn kop_stem_minus_one() {
    for p in [3, 5, 7] {
        let o = ko_picard(p, 16).unwrap().run().unwrap();
        show(&o);
        assert!(o.matches(), "p = {p}");
        let c = kop_completion(p, &o).unwrap();
        assert_eq!(c.tate.to_string(), "Z/2");
        assert!(c.map_is_zero);
    }
}

#[test]
fn ko_homotopy_groups() {
    let o = ko_homotopy(16).unwrap().run().unwrap();
    show(&o);
    assert!(o.matches());
}

#[test]
fn lbr_route_picks_z4() {
    let r = ko2_lbr_route(16, 4).unwrap();
    assert_eq!(r.lbr_ko.to_string(), "Z/8");
    assert_eq!(r.lbr_ku.to_string(), "Z/2");
    assert_eq!(r.result.to_string(), "Z/4");
    assert_eq!(r.cross_check.to_string(), "Z/4");
}

#[test]
fn odd_primes() {
    for p in [3, 5, 7, 11, 13] {
        let o = odd(p, 16).unwrap().run().unwrap();
        show(&o);
        assert!(o.matches(), "p = {p}");
    }
}


#[test]
fn p2_stem_minus_one() {
    let o = p2(16).unwrap().run().unwrap();
    show(&o);
    let r = o.readout("Br_1^0").unwrap();
    assert_eq!(r.graded_order(), Some(32));
    let flat: Vec<usize> = flatten_pieces(&r.pieces).iter().map(|(s, _)| *s).collect();
    assert_eq!(flat, vec![1, 2, 2, 4, 6]);
    assert_eq!(r.generator_orders, vec![Some(8), Some(4)]);
    assert!(o.matches());
}

#[test]
fn descent_scenarios() {
    let o = ko2_descent(16).unwrap().run().unwrap();
    show(&o);
    assert_eq!(o.e2.page.structure(crate::sseq::Bidegree::new(0, 0)).unwrap().unwrap().to_string(), "Z/4");
    assert_eq!(o.e2.page.structure(crate::sseq::Bidegree::new(1, 1)).unwrap().unwrap().to_string(), "Z/8");
    assert!(o.matches());
    let c = ko2_coinvariants(16).unwrap();
    assert_eq!(c.module.to_string(), "Z/8");
    assert_eq!(c.labels, vec![KO_CLASS.to_string()]);
    let o = ko2nr(16).unwrap().run().unwrap();
    show(&o);
    assert!(o.matches());
}

#[test]
fn all_named_scenarios_match_and_are_precision_stable() {
    for name in scenario_names() {
        let file = named(&name, 16).unwrap();
        let a = file.run_at(16).unwrap();
        let b = file.run_at(18).unwrap();
        assert!(a.matches(), "{name}");
        let render = |o: &Outcome| o.readouts.iter().map(|r| r.rendered()).collect::<Vec<_>>();
        assert_eq!(render(&a), render(&b), "{name}");
        println!("{name}: {}", headline(&file, &a).unwrap());
    }
}

#[test]
fn odd_without_d2_changes_the_answer() {
    let mut file = odd(5, 16).unwrap();
    file.script.clear();
    match file.run() {
        Ok(o) => assert!(!o.matches()),
        Err(_) => {}
    }
}

#[test]
fn toml_round_trip() {
    for name in ["p2", "odd:3", "ko2-descent"] {
        let file = named(name, 16).unwrap();
        let text = file.to_toml().unwrap();
        let back = ScenarioFile::from_toml(&text).unwrap();
        assert_eq!(back, file, "{name}");
        assert!(back.run().unwrap().matches());
    }
}

#[test]
fn unknown_names() {
    assert!(matches!(named("odd:4", 16), Err(ScenarioError::Invalid(_))));
    assert!(matches!(named("nope", 16), Err(ScenarioError::Unknown(_))));
}
