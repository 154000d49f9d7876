//! Property suites: Smith normal form, d o d rejection, extension orders,
//! chart determinism. Each runs a seeded proptest runner and reports the first failure.

use descent::cohomology::marked;
use descent::fgab::local::GenOrder;
use descent::fgab::{assemble_extension, ext_group, smith_normal_form, Elementary, ExtensionClass, FgModule};
use descent::height1::{named, scenario_names};
use descent::sseq::{
    emit_chart, parse_chart, turn_page, Bidegree, ChartFormat, DifferentialScript, Provenance, ProvenanceTag,
    ScriptEntry, SseqError, SseqPage, Window,
};
use descent::Matrix;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `D_k`, the gcd of all `k x k` minors.
fn determinantal_divisor(rows: &[Vec<i128>], k: usize) -> i128 {
    let (r, c) = (rows.len(), rows[0].len());
    let mut g = 0;
    for rs in subsets(r, k) {
        for cs in subsets(c, k) {
            let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
            g = gcd(g, det(&minor));
        }
    }
    g
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i128>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-24i128..=24, c), r))
}

pub fn snf(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&matrix_strategy(), |rows| {
        let c = rows[0].len();
        let m = Matrix::from_rows(c, rows.clone()).unwrap();
        let snf = smith_normal_form(&m).unwrap();
        prop_assert_eq!(snf.u.checked_mul(&m).unwrap().checked_mul(&snf.v).unwrap(), snf.d.clone());
        prop_assert!(snf.d.is_diagonal());
        prop_assert_eq!(det(&snf.u.to_rows()).abs(), 1);
        prop_assert_eq!(det(&snf.v.to_rows()).abs(), 1);
        let f = snf.invariant_factors();
        prop_assert!(f.iter().all(|&x| x > 0));
        prop_assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
        let mut product = 1;
        for k in 1..=rows.len().min(c) {
            let dk = determinantal_divisor(&rows, k);
            if k <= f.len() {
                product *= f[k - 1];
                prop_assert_eq!(dk, product);
            } else {
                prop_assert_eq!(dk, 0);
            }
        }
        Ok(())
    }))
}

fn declared() -> Provenance {
    Provenance::new(ProvenanceTag::Declared, "property test")
}

fn b(s: usize, t: i64) -> Bidegree {
    Bidegree::new(s, t)
}

fn chain(a: u32, bb: u32, c: u32) -> SseqPage {
    let mut page = SseqPage::new("chain", 2, 2, 12, Window::new(4, 0, 4));
    page.set_module(b(0, 0), marked(2, 12, &[(GenOrder::Finite(1 << a), "a")])).unwrap();
    page.set_module(b(2, 1), marked(2, 12, &[(GenOrder::Finite(1 << bb), "b")])).unwrap();
    page.set_module(b(4, 2), marked(2, 12, &[(GenOrder::Finite(1 << c), "c")])).unwrap();
    page
}

pub fn d_squared(cases: u32) -> Result<(), String> {
    let strategy = (1u32..=4, 1u32..=4, 1u32..=4, 0i128..16, 0i128..16);
    report(runner(cases).run(&strategy, |(a, bb, c, k1, k2)| {
        let m1 = k1 * (1i128 << bb.saturating_sub(a));
        let m2 = k2 * (1i128 << c.saturating_sub(bb));
        let script = DifferentialScript::new(vec![
            ScriptEntry::new(2, b(0, 0), vec![vec![m1]], declared()),
            ScriptEntry::new(2, b(2, 1), vec![vec![m2]], declared()),
        ]);
        let composite_vanishes = (m1 * m2) % (1i128 << c) == 0;
        match turn_page(&chain(a, bb, c), &script) {
            Ok(_) => prop_assert!(composite_vanishes),
            Err(SseqError::DSquaredNonzero { page: 2, middle }) => {
                prop_assert!(!composite_vanishes);
                prop_assert_eq!(middle, b(2, 1));
            }
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
        Ok(())
    }))
}

fn exponents(m: &FgModule) -> Vec<Option<u32>> {
    m.elementary()
        .into_iter()
        .map(|e| match e {
            Elementary::Free => None,
            Elementary::Power { exp, .. } => Some(exp),
        })
        .collect()
}

fn module_strategy() -> impl Strategy<Value = (usize, Vec<u32>)> {
    (0usize..=1, prop::collection::vec(1u32..=4, 0..=3))
}

pub fn extension_orders(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::sample::select(vec![2u64, 3]),
        module_strategy(),
        prop::collection::vec(1u32..=4, 0..=3),
        prop::collection::vec(0u128..1 << 20, 12),
    );
    report(runner(cases).run(&strategy, |(p, (sub_free, sub_t), quot_t, seed)| {
        let pow = |e: u32| (p as u128).pow(e);
        let sub = FgModule::new(p, 16, sub_free, sub_t.iter().map(|&e| pow(e))).unwrap();
        let quot = FgModule::new(p, 16, 0, quot_t.iter().map(|&e| pow(e))).unwrap();
        let se = exponents(&sub);
        let qe = exponents(&quot);
        let mut next = seed.iter().cycle();
        let value: Vec<Vec<u128>> = qe
            .iter()
            .map(|q| {
                let q = q.expect("torsion quotient");
                se.iter().map(|s| next.next().unwrap() % pow(s.map_or(q, |s| s.min(q)))).collect()
            })
            .collect();
        let class = ExtensionClass::new(sub.clone(), quot.clone(), value).unwrap();
        let middle = assemble_extension(&class).unwrap();
        prop_assert_eq!(middle.free_rank(), sub.free_rank());
        let torsion = |m: &FgModule| m.torsion().iter().product::<u128>();
        prop_assert_eq!((torsion(&sub) * torsion(&quot)) % torsion(&middle), 0);
        if sub_free == 0 {
            prop_assert_eq!(middle.order().unwrap(), sub.order().unwrap() * quot.order().unwrap());
        }
        let ext_order: u128 = qe
            .iter()
            .map(|q| se.iter().map(|s| pow(s.map_or(q.unwrap(), |s| s.min(q.unwrap())))).product::<u128>())
            .product();
        prop_assert_eq!(ext_group(&quot, &sub).unwrap().order().unwrap(), ext_order);
        if class.is_split() {
            prop_assert_eq!(middle, sub.direct_sum(&quot).unwrap());
        }
        Ok(())
    }))
}

pub fn random_charts(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::collection::btree_map((0usize..=3, 0i64..=6), prop::collection::vec(1u32..=3, 1..=2), 0..8),
        any::<bool>(),
    );
    report(runner(cases).run(&strategy, |(cells, svg)| {
        let mut page = SseqPage::new("random", 2, 2, 8, Window::new(3, 0, 6));
        for ((s, t), exps) in &cells {
            let labels: Vec<String> = (0..exps.len()).map(|i| format!("x{s}{t}{i}")).collect();
            let gens: Vec<(GenOrder, &str)> =
                exps.iter().zip(&labels).map(|(e, l)| (GenOrder::Finite(1 << e), l.as_str())).collect();
            page.set_module(b(*s, *t), marked(2, 8, &gens)).unwrap();
        }
        let script = DifferentialScript::default();
        let format = if svg { ChartFormat::Svg } else { ChartFormat::Text };
        let first = emit_chart(&page, &script, format).unwrap();
        prop_assert_eq!(&first, &emit_chart(&page.clone(), &script, format).unwrap());
        if !svg {
            let parsed = parse_chart(&first).unwrap();
            prop_assert!(parsed.page.same_structure(&page));
            prop_assert_eq!(emit_chart(&parsed.page, &parsed.script, format).unwrap(), first);
        }
        Ok(())
    }))
}

/// Every page of every built-in scenario, emitted twice from independent runs.
pub fn scenario_charts() -> Result<(), String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    for name in scenario_names() {
        let file = named(&name, 16).map_err(|e| err(&e))?;
        let a = file.run().map_err(|e| err(&e))?;
        let b = file.run().map_err(|e| err(&e))?;
        for (pa, pb) in a.ss.pages().iter().zip(b.ss.pages()) {
            for format in [ChartFormat::Text, ChartFormat::Svg] {
                let x = emit_chart(pa, a.ss.script(), format).map_err(|e| err(&e))?;
                if x != emit_chart(pb, b.ss.script(), format).map_err(|e| err(&e))? {
                    return Err(format!("{name} E_{} differs between runs", pa.r()));
                }
            }
            let text = emit_chart(pa, a.ss.script(), ChartFormat::Text).map_err(|e| err(&e))?;
            let parsed = parse_chart(&text).map_err(|e| err(&e))?;
            if !parsed.page.same_structure(pa) {
                return Err(format!("{name} E_{} does not survive a chart round trip", pa.r()));
            }
        }
    }
    Ok(())
}
