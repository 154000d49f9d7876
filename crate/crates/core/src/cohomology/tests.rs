use super::*;
use crate::fgab::local::GenOrder::{Finite, Free};

fn mat(rows: Vec<Vec<i128>>) -> Matrix {
    let c = rows.first().map_or(0, |r| r.len());
    IntMatrix::from_rows(c, rows).unwrap()
}

fn fg(p: u64, free: usize, orders: &[u128]) -> FgModule {
    FgModule::new(p, 16, free, orders.iter().copied()).unwrap()
}

fn c(n: u64) -> FactorKind {
    FactorKind::FiniteCyclic(n)
}

#[test]
fn c2_on_z2_is_periodic() {
    let m = marked(2, 16, &[(Finite(2), "x")]);
    let act = GAction::trivial(GroupSpec::single(c(2), "s"), m.clone());
    let h = cyclic_cohomology(2, &act, 4).unwrap();
    assert!(h.iter().all(|x| *x == fg(2, 0, &[2])));
    for s in 0..=3 {
        assert_eq!(bar_oracle(&[2], &m, &[m.identity()], s).unwrap(), fg(2, 0, &[2]));
    }
}

#[test]
fn teichmuller_factor_on_units() {
    let m = marked(5, 16, &[(Finite(4), "w"), (Free, "1+p")]);
    let act = GAction::trivial(GroupSpec::single(c(4), "w"), m);
    let h = cyclic_cohomology(4, &act, 4).unwrap();
    assert_eq!(h[0], fg(5, 1, &[4]));
    for x in &h[1..] {
        assert_eq!(*x, fg(5, 0, &[4]));
    }
    assert_eq!(tate_hat_zero(4, &act).unwrap().structure().unwrap(), fg(5, 0, &[4]));
}

#[test]
fn c2_on_two_adic_units() {
    let m = marked(2, 16, &[(Finite(2), "-1"), (Free, "5")]);
    let act = GAction::trivial(GroupSpec::single(c(2), "-1"), m);
    let h = cyclic_cohomology(2, &act, 3).unwrap();
    assert_eq!(h[1], fg(2, 0, &[2]));
    assert_eq!(h[2], fg(2, 0, &[2, 2]));
    let t = tate_hat_zero(2, &act).unwrap();
    assert!(!t.is_boundary(&[1, 0]).unwrap());
}

#[test]
fn procyclic_examples() {
    let m = marked(3, 16, &[(Free, "u")]);
    let act = GAction::new(GroupSpec::single(FactorKind::Procyclic(3), "4"), m, vec![mat(vec![vec![64]])]).unwrap();
    let h = procyclic_cohomology(&act, 3).unwrap();
    assert!(h[0].is_zero());
    assert_eq!(h[1], fg(3, 0, &[9]));
    assert!(h[2].is_zero() && h[3].is_zero());

    let m = marked(2, 16, &[(Finite(8), "x")]);
    let act = GAction::trivial(GroupSpec::single(FactorKind::ProcyclicHat, "F"), m);
    let h = procyclic_cohomology(&act, 2).unwrap();
    assert_eq!(h[0], fg(2, 0, &[8]));
    assert_eq!(h[1], fg(2, 0, &[8]));
    assert!(h[2].is_zero());
}

#[test]
fn prime_to_p_coefficients_under_zp() {
    let m = marked(3, 16, &[(Finite(2), "x")]);
    let act = GAction::trivial(GroupSpec::single(FactorKind::Procyclic(3), "4"), m);
    let h = procyclic_cohomology(&act, 2).unwrap();
    assert_eq!(h[0], fg(3, 0, &[2]));
    assert!(h[1].is_zero());
}

#[test]
fn product_examples() {
    let g = GroupSpec::new(vec![Factor::new(FactorKind::Procyclic(2), "5"), Factor::new(FactorKind::ProcyclicHat, "F")]).unwrap();
    let act = GAction::trivial(g, marked(2, 16, &[(Finite(8), "x")]));
    let r = product_cohomology(&act, 3).unwrap();
    assert_eq!(r.degrees[1], fg(2, 0, &[8, 8]));
    assert_eq!(r.degrees[2], fg(2, 0, &[8]));
    assert!(r.degrees[3].is_zero());
    assert!(r.pieces.iter().flatten().all(|p| p.split));

    let g = GroupSpec::new(vec![Factor::new(c(2), "-1"), Factor::new(FactorKind::Procyclic(3), "4")]).unwrap();
    let act = GAction::trivial(g, marked(3, 16, &[(Finite(2), "x")]));
    let r = product_cohomology(&act, 4).unwrap();
    assert!(r.degrees.iter().all(|x| *x == fg(3, 0, &[2])));

    let g = GroupSpec::new(vec![Factor::new(c(2), "-1"), Factor::new(FactorKind::Procyclic(2), "5")]).unwrap();
    let act = GAction::trivial(g, marked(2, 16, &[(Finite(2), "-1"), (Free, "5")]));
    let r = product_cohomology(&act, 4).unwrap();
    assert_eq!(r.degrees[0], fg(2, 1, &[2]));
    assert_eq!(r.degrees[1], fg(2, 1, &[2, 2]));
    for s in 2..=4 {
        assert_eq!(r.degrees[s], fg(2, 0, &[2, 2, 2]));
    }
}

#[test]
fn non_commuting_rejected() {
    let g = GroupSpec::new(vec![Factor::new(c(2), "a"), Factor::new(c(2), "b")]).unwrap();
    let m = marked(2, 16, &[(Finite(2), "x"), (Finite(2), "y")]);
    let a = mat(vec![vec![0, 1], vec![1, 0]]);
    let b = mat(vec![vec![1, 1], vec![0, 1]]);
    let act = GAction::new(g, m, vec![a, b]).unwrap();
    assert!(matches!(product_cohomology(&act, 1), Err(CohomologyError::NonCommutingActions(0, 1))));
}

#[test]
fn representatives_round_trip() {
    let g = GroupSpec::new(vec![Factor::new(c(2), "-1"), Factor::new(FactorKind::Procyclic(2), "5")]).unwrap();
    let act = GAction::trivial(g, marked(2, 16, &[(Finite(2), "-1"), (Free, "5")]));
    let t = TotalCohomology::compute(&act, 3).unwrap();
    for s in 0..=3 {
        for i in 0..t.degree(s).len() {
            let rep = t.representative(s, i).unwrap();
            let mut e = vec![0; t.degree(s).len()];
            e[i] = 1;
            assert_eq!(t.coords(s, &rep).unwrap(), e, "degree {s} generator {i}");
        }
    }
}

#[test]
fn bockstein_orders() {
    for k in 2..=4u64 {
        let g = FiniteGroup::cyclic(k);
        let b = bockstein(&g, k, &[1], (k as u128).pow(3)).unwrap();
        assert!(b.is_cocycle().unwrap());
        let zero = CocycleTable { values: vec![vec![0]; b.values.len()], ..b.clone() };
        for m in 1..=k {
            let mb = CocycleTable { values: b.values.iter().map(|v| vec![v[0] * m as i128]).collect(), ..b.clone() };
            let trivial = cocycles_cohomologous(&mb, &zero).unwrap().is_some();
            assert_eq!(trivial, m == k, "k={k} m={m}");
        }
    }
    let g = FiniteGroup::cyclic(4);
    let b = bockstein(&g, 2, &[1], 64).unwrap();
    let zero = CocycleTable { values: vec![vec![0]; b.values.len()], ..b.clone() };
    assert!(cocycles_cohomologous(&b, &zero).unwrap().is_none());
    let b2 = CocycleTable { values: b.values.iter().map(|v| vec![v[0] * 2]).collect(), ..b.clone() };
    assert!(cocycles_cohomologous(&b2, &zero).unwrap().is_some());
    assert!(bockstein(&FiniteGroup::cyclic(3), 2, &[1], 8).is_err());
}

#[test]
fn sign_unit_symbol_is_nontrivial() {
    let g = FiniteGroup::cyclic(2);
    let m = marked(2, 8, &[(Finite(2), "-1"), (Finite(64), "5")]);
    let b = bockstein(&g, 2, &[1], 8).unwrap();
    let cup = cup_with_unit(&b, &m, &[m.identity()], &[1, 0]).unwrap();
    assert!(cup.is_cocycle().unwrap());
    let zero = CocycleTable { values: vec![vec![0, 0]; 4], ..cup.clone() };
    assert!(cocycles_cohomologous(&cup, &zero).unwrap().is_none());
    assert!(cocycles_cohomologous(&cup, &cup).unwrap().is_some());
}

#[test]
fn oracle_on_induced_module() {
    // Z/2[C_3] with the regular action.
    let m = marked(2, 16, &[(Finite(2), "e0"), (Finite(2), "e1"), (Finite(2), "e2")]);
    let shift = mat(vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
    for s in 1..=3 {
        assert!(bar_oracle(&[3], &m, &[shift.clone()], s).unwrap().is_zero());
    }
    assert_eq!(bar_oracle(&[3], &marked(3, 16, &[(Finite(3), "x")]), &[IntMatrix::identity(1)], 1).unwrap(), fg(3, 0, &[3]));
}
