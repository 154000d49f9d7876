//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::fmt::Display;
use std::time::{Duration, Instant};

use descent::cohomology::{
    bockstein, cocycles_cohomologous, cup_with_unit, marked, FiniteGroup, GAction, TotalCohomology,
};
use descent::cyclic::{
    conjugation_semiring_coefficients, standard_cocycle, symbol_detect, twisted_fixed_algebra, GaloisRing,
};
use descent::fgab::local::GenOrder;
use descent::fgab::FgModule;
use descent::height1::{
    headline, hilbert90, ko2_coinvariants, ko2_lbr_route, ku_picard_row, named, scenario_names, unit_generators,
    unit_group_pi0, units_group, units_module, Outcome,
};
use descent::sseq::{build_e2, Bidegree, Window};

type Check = Result<(), String>;

const N: u32 = 16;

fn s(e: impl Display) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(name: &str) -> Result<Outcome, String> {
    named(name, N).map_err(s)?.run().map_err(s)
}

fn readout(out: &Outcome, name: &str) -> Result<String, String> {
    out.readout(name).map(|r| r.rendered()).ok_or_else(|| format!("no readout {name}"))
}

fn odd_brauer() -> Check {
    for p in [3u64, 5, 7, 11, 13] {
        let start = Instant::now();
        let out = run(&format!("odd:{p}"))?;
        let elapsed = start.elapsed();
        let total = out
            .readout("Br_1^0")
            .and_then(|r| r.assembly.as_ref())
            .map(|a| a.total.clone())
            .ok_or("no assembled Br_1^0")?;
        let expected = FgModule::new(p, N, 0, [p as u128 - 1]).map_err(s)?;
        ensure(total == expected, || format!("p={p}: {total} != {expected}"))?;
        ensure(elapsed < Duration::from_secs(1), || format!("p={p} took {} ms", elapsed.as_millis()))?;
    }
    Ok(())
}

fn odd_e2_expected(s_: usize, t: i64) -> String {
    let p = 3i64;
    match t {
        0 => "Z/2".into(),
        1 if s_ <= 1 => "Z_3 + Z/2".into(),
        1 => "Z/2".into(),
        t if s_ == 1 && t > 1 && (t - 1) % (2 * (p - 1)) == 0 => {
            let mut tp = (t - 1) / (2 * (p - 1));
            let mut nu = 0;
            while tp % p == 0 {
                tp /= p;
                nu += 1;
            }
            format!("Z/{}", p.pow(nu + 1))
        }
        _ => "0".into(),
    }
}

fn odd_e2_table() -> Check {
    let p = 3;
    let group = units_group(p);
    let gens = unit_generators(p);
    let window = Window::new(3, 0, 13);
    let rows = (window.t_min..=window.t_max)
        .map(|t| Ok((t, ku_picard_row(p, N, &group, &gens, t).map_err(s)?)))
        .collect::<Result<Vec<_>, String>>()?;
    let coeffs = |t: i64| Ok(rows.iter().find(|(rt, _)| *rt == t).and_then(|(_, a)| a.clone()));
    let e2 = build_e2("odd:3", &group, &coeffs, window, p, N).map_err(s)?;
    for b in window.bidegrees() {
        let got = e2.page.structure(b).map_err(s)?.map_or("0".to_string(), |m| m.to_string());
        let want = odd_e2_expected(b.s, b.t);
        ensure(got == want, || format!("E_2 at {b}: {got}, expected {want}"))?;
    }
    ensure(e2.page.structure(Bidegree::new(1, 13)).map_err(s)?.map(|m| m.to_string()) == Some("Z/9".into()), || {
        "E_2^{1,13} is not Z/9".into()
    })
}

fn p2_rows() -> Check {
    let group = units_group(2);
    let pic = GAction::trivial(group.clone(), marked(2, N, &[(GenOrder::Finite(2), "pic")]));
    let units = GAction::trivial(group.clone(), units_module(2, N));
    let render = |act: &GAction| -> Result<Vec<String>, String> {
        let h = TotalCohomology::compute(act, 4).and_then(|c| c.structures()).map_err(s)?;
        Ok(h.iter().map(|m| m.to_string()).collect())
    };
    let two = "Z/2 + Z/2".to_string();
    ensure(render(&pic)? == vec!["Z/2".to_string(), two.clone(), two.clone(), two.clone(), two], || {
        format!("H^*(Z_2^x, Z/2) = {:?}", render(&pic))
    })?;
    let three = "Z/2 + Z/2 + Z/2".to_string();
    let want = vec!["Z_2 + Z/2".to_string(), "Z_2 + Z/2 + Z/2".into(), three.clone(), three.clone(), three];
    ensure(render(&units)? == want, || format!("H^*(Z_2^x, Z_2^x) = {:?}", render(&units)))
}

fn p2_stem() -> Check {
    let out = run("p2")?;
    let r = out.readout("Br_1^0").ok_or("no Br_1^0")?;
    ensure(r.graded_order() == Some(32), || format!("graded order {:?}", r.graded_order()))?;
    ensure(r.rendered() == "Z/8 + Z/4", || format!("assembled {}", r.rendered()))?;
    ensure(r.generator_orders == vec![Some(8), Some(4)], || format!("generator orders {:?}", r.generator_orders))
}

fn ko2() -> Check {
    let file = named("ko2", N).map_err(s)?;
    let out = file.run().map_err(s)?;
    let bound = out.readout("Br(KO_2|KU_2)").and_then(|r| r.graded_order()).ok_or("no finite (-1)-stem")?;
    let route = ko2_lbr_route(N, bound).map_err(s)?;
    ensure(route.lbr_ko.to_string() == "Z/8", || format!("LBr(KO_2) = {}", route.lbr_ko))?;
    ensure(route.lbr_ku.to_string() == "Z/2", || format!("LBr(KU_2) = {}", route.lbr_ku))?;
    ensure(route.result.to_string() == "Z/4", || format!("result {}", route.result))?;
    ensure(route.cross_check == route.result, || format!("cross-check {}", route.cross_check))?;
    let line = headline(&file, &out).map_err(s)?;
    ensure(line == "Br(KO_2|KU_2) = Z/4", || line.clone())
}

fn descent() -> Check {
    let out = run("ko2-descent")?;
    let at = |s_: usize, t| out.e2.page.structure(Bidegree::new(s_, t)).map_err(s).map(|m| m.map(|m| m.to_string()));
    ensure(at(0, 0)? == Some("Z/4".into()), || format!("E_2^(0,0) = {:?}", at(0, 0)))?;
    ensure(at(1, 1)? == Some("Z/8".into()), || format!("E_2^(1,1) = {:?}", at(1, 1)))?;
    let coinv = ko2_coinvariants(N).map_err(s)?;
    ensure(coinv.module.to_string() == "Z/8", || format!("coinvariants {}", coinv.module))?;
    let br = readout(&out, "Br'(Sp_K|KU_2)")?;
    ensure(br == "Z/8 + Z/4", || format!("Br' = {br}"))?;
    let nr = readout(&run("ko2nr")?, "Br'(1_K|KO_2^nr)")?;
    ensure(nr == "Z/8 + Z/8", || format!("Br'(1_K|KO_2^nr) = {nr}"))?;
    let mut direct = 0;
    for n in 1..=6 {
        for precision in 1..=8 {
            let h = hilbert90(n, precision).map_err(s)?;
            ensure(h.h1 == 1, || format!("H^1 has order {} for n={n}, N={precision}", h.h1))?;
            if let Some(d) = h.h1_direct {
                ensure(d == 1, || format!("direct H^1 has order {d} for n={n}, N={precision}"))?;
                direct += 1;
            }
        }
    }
    ensure(direct >= 20, || format!("only {direct} cases enumerated directly"))
}

fn pic() -> Check {
    let two = readout(&run("ko2-descent")?, "Pic_1")?;
    ensure(two == "Z_2 + Z/4 + Z/2", || format!("Pic_1 at 2 = {two}"))?;
    for p in [3u64, 5, 7, 11, 13] {
        let got = run(&format!("odd:{p}"))?
            .readout("Pic_1")
            .and_then(|r| r.assembly.as_ref())
            .map(|a| a.total.clone())
            .ok_or("no assembled Pic_1")?;
        let units = unit_group_pi0(p, N).map_err(s)?.structure;
        let want = units.direct_sum(&FgModule::new(p, N, 0, [2]).map_err(s)?).map_err(s)?;
        ensure(got == want, || format!("Pic_1 at {p} = {got}, expected {want}"))?;
    }
    Ok(())
}

fn symbols() -> Check {
    for p in [3u64, 5, 7] {
        let m = marked(p, N, &[(GenOrder::Finite(p as u128 - 1), "omega")]);
        let id = m.identity();
        let omega = symbol_detect(p - 1, 1, &m, &id, &[1]).map_err(s)?;
        ensure(omega.nonzero && omega.order == p as u128 - 1, || format!("p={p}: order {}", omega.order))?;
        let one = symbol_detect(p - 1, 1, &m, &id, &[0]).map_err(s)?;
        ensure(!one.nonzero, || format!("p={p}: beta u 1 is nonzero"))?;
    }
    for k in 2..=4u64 {
        let group = FiniteGroup::cyclic(k);
        for n in [k as u128, 2 * k as u128, 12] {
            let m = marked(2, N, &[(GenOrder::Finite(n), "u")]);
            let id = m.identity();
            let beta = bockstein(&group, k, &[1], n).map_err(s)?;
            for u in 0..n as i128 {
                let standard = standard_cocycle(k, &m, &id, &[u]).map_err(s)?;
                let symbol = cup_with_unit(&beta, &m, std::slice::from_ref(&id), &[u]).map_err(s)?;
                let w = cocycles_cohomologous(&standard, &symbol)
                    .map_err(s)?
                    .ok_or_else(|| format!("k={k} n={n} u={u}: no coboundary witness"))?
                    .cochain;
                // Trivial action: (dw)(g, h) = w(h) - w(gh) + w(g).
                let size = group.size();
                for g in 0..size {
                    for h in 0..size {
                        let dw = w.value(&[h])[0] - w.value(&[group.mul(g, h)])[0] + w.value(&[g])[0];
                        let diff = standard.value(&[g, h])[0] - symbol.value(&[g, h])[0];
                        ensure((dw - diff).rem_euclid(n as i128) == 0 || (dw + diff).rem_euclid(n as i128) == 0, || {
                            format!("k={k} n={n} u={u}: witness fails at ({g},{h})")
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn twisted() -> Check {
    for (p, k) in [(2u64, 2usize), (3, 2), (5, 2)] {
        let ring = GaloisRing::field(p, k).map_err(s)?;
        for u in 1..p as u128 {
            let a = twisted_fixed_algebra(&ring, &ring.from_base(u)).map_err(s)?;
            let tag = format!("F{}/F{p} u={u}", p.pow(k as u32));
            ensure(a.rank() == k * k, || format!("{tag}: rank {}", a.rank()))?;
            ensure(a.center_dimension == 1, || format!("{tag}: center dimension {}", a.center_dimension))?;
            ensure(a.is_associative(), || format!("{tag}: not associative"))?;
            let e = a.idempotent.clone().or_else(|| a.find_rank_one_idempotent()).ok_or(format!("{tag}: no idempotent"))?;
            ensure(a.is_rank_one_idempotent(&e), || format!("{tag}: certificate rejected"))?;
        }
    }
    Ok(())
}

fn semiring() -> Check {
    for k in 1..=6 {
        for j in 0..=2 * k {
            let t = conjugation_semiring_coefficients(k, j);
            ensure(t.all_zero_or_one(), || format!("k={k} j={j}: coefficient outside {{0, 1}}"))?;
        }
    }
    Ok(())
}

fn oracle() -> Check {
    let cases = common::oracle::run_cases(240)?;
    ensure(cases >= 200, || format!("only {cases} cases"))
}

fn properties() -> Check {
    use common::properties::*;
    snf(1000)?;
    d_squared(256)?;
    extension_orders(256)?;
    random_charts(128)?;
    scenario_charts()?;
    for name in scenario_names() {
        let file = named(&name, N).map_err(s)?;
        let low = file.run_at(N).map_err(s)?;
        let high = file.run_at(N + 2).map_err(s)?;
        for (a, b) in low.readouts.iter().zip(&high.readouts) {
            ensure(a.rendered() == b.rendered(), || {
                format!("{name} {}: {} at {N}, {} at {}", a.readout.name, a.rendered(), b.rendered(), N + 2)
            })?;
        }
        ensure(low.matches() && high.matches(), || format!("{name} misses its expectation"))?;
    }
    Ok(())
}

fn ledger() -> Check {
    for name in scenario_names() {
        let file = named(&name, N).map_err(s)?;
        file.validate().map_err(s)?;
        for f in &file.facts {
            ensure(!f.anchor.trim().is_empty(), || format!("{name}: {} has no anchor", f.claim))?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("odd-prime Brauer groups Z/(p-1)", odd_brauer),
        ("odd-prime E_2 table at p = 3", odd_e2_table),
        ("p = 2 E_2 rows", p2_rows),
        ("p = 2 (-1)-stem of order 32, assembled Z/8 + Z/4", p2_stem),
        ("Br(KO_2|KU_2) = Z/4 via LBr", ko2),
        ("iterated descent and Hilbert 90", descent),
        ("Pic_1 at p = 2 and odd p", pic),
        ("symbol detection", symbols),
        ("twisted matrix algebras split", twisted),
        ("semiring coefficients in {0, 1}", semiring),
        ("periodic cohomology against the bar oracle", oracle),
        ("property suites and precision stability", properties),
        ("declared facts carry anchors", ledger),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|x| x.to_string())).unwrap_or_default())
        });
        let label = if i < 12 { format!("criterion {:>2}", i + 1) } else { "ledger      ".to_string() };
        match result {
            Ok(()) => println!("{label} PASS {name} ({} ms)", t.elapsed().as_millis()),
            Err(e) => {
                failed += 1;
                println!("{label} FAIL {name}: {e}");
            }
        }
    }
    println!("{} of {} passed in {} ms", criteria.len() - failed, criteria.len(), start.elapsed().as_millis());
    if failed > 0 {
        std::process::exit(1);
    }
}
