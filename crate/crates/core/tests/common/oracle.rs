//! Periodic-resolution cohomology against the bar-complex oracle on random
//! finite groups, modules and actions.

use descent::cohomology::{bar_oracle, marked, product_cohomology, Factor, FactorKind, GAction, GroupSpec};
use descent::fgab::local::{GenOrder, MarkedModule};
use descent::{IntMatrix, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: &[&[u64]] = &[&[2], &[3], &[4], &[6], &[2, 2], &[2, 3]];
/// Bar cochains in degree s+1 are capped at this many coordinates.
const BUDGET: usize = 500;

fn random_module(rng: &mut ChaCha8Rng) -> MarkedModule {
    let choices: &[u128] = &[2, 3, 4, 8, 9, 2, 4, 6, 16];
    loop {
        let k = rng.gen_range(1..=3);
        let orders: Vec<u128> = (0..k).map(|_| choices[rng.gen_range(0..choices.len())]).collect();
        if orders.iter().product::<u128>() <= 64 {
            let gens: Vec<(GenOrder, String)> = orders.iter().enumerate().map(|(i, &n)| (GenOrder::Finite(n), format!("e{i}"))).collect();
            let refs: Vec<(GenOrder, &str)> = gens.iter().map(|(o, l)| (*o, l.as_str())).collect();
            let p = descent::arith::factor(orders[0])[0].0;
            return marked(p, 16, &refs);
        }
    }
}

fn random_endo(rng: &mut ChaCha8Rng, m: &MarkedModule) -> Matrix {
    let k = m.len();
    let mut a = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let (ni, nj) = (m.modulus(i), m.modulus(j));
            let step = nj / descent::arith::gcd(ni, nj);
            let mult = rng.gen_range(0..nj / step) as i128;
            a.set(i, j, mult * step as i128);
        }
    }
    a
}

fn order_of(m: &MarkedModule, a: &Matrix) -> Option<u64> {
    let id = m.reduce_matrix(&m.identity());
    let mut pow = m.reduce_matrix(a);
    for n in 1..=4096u64 {
        if pow == id {
            return Some(n);
        }
        pow = m.compose(&pow, a).ok()?;
    }
    None
}

fn random_action(rng: &mut ChaCha8Rng, m: &MarkedModule, orders: &[u64]) -> Option<Vec<Matrix>> {
    let a = random_endo(rng, m);
    let ord = order_of(m, &a)?;
    let gens: Vec<Matrix> = orders
        .iter()
        .map(|&n| {
            let g = descent::arith::gcd(ord as u128, n as u128) as u64;
            let e = (ord / g) * rng.gen_range(1..=g);
            descent::cohomology::matrix_power(m, &a, e as u128).unwrap()
        })
        .collect();
    Some(gens)
}

/// Runs seeded random cases until `target` succeed; returns the count or the first disagreement.
pub fn run_cases(target: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut cases = 0;
    let mut attempts = 0;
    while cases < target && attempts < 5000 {
        attempts += 1;
        let orders = GROUPS[rng.gen_range(0..GROUPS.len())];
        let m = random_module(&mut rng);
        let Some(gens) = random_action(&mut rng, &m, orders) else { continue };
        let factors = orders.iter().enumerate().map(|(i, &n)| Factor::new(FactorKind::FiniteCyclic(n), format!("g{i}"))).collect();
        let group = GroupSpec::new(factors).unwrap();
        let Ok(act) = GAction::new(group, m.clone(), gens.clone()) else { continue };
        let size: usize = orders.iter().product::<u64>() as usize;
        let mut s_max = 0;
        while s_max < 4 && (size - 1).pow(s_max as u32 + 2) * m.len() <= BUDGET {
            s_max += 1;
        }
        let periodic = product_cohomology(&act, s_max).map_err(|e| e.to_string())?;
        for s in 0..=s_max {
            let brute = bar_oracle(orders, &m, &gens, s).map_err(|e| e.to_string())?;
            if periodic.degrees[s] != brute {
                return Err(format!("G={orders:?} M={m:?} gens={gens:?} s={s}: {} vs {brute}", periodic.degrees[s]));
            }
        }
        cases += 1;
    }
    Ok(cases)
}
