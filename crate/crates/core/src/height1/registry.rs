//! Built-in scenarios by name.

use crate::height1::{
    ko2_descent, ko2_lbr_route, ko2nr, ko_homotopy, ko_picard, odd, p2, Outcome, Result, ScenarioError, ScenarioFile,
};

/// Every built-in scenario, in the order `scenario all` runs them.
pub fn scenario_names() -> Vec<String> {
    let mut names: Vec<String> = [3, 5, 7, 11, 13].iter().map(|p| format!("odd:{p}")).collect();
    names.extend(["p2", "ko2", "ko2-descent", "ko2nr"].map(String::from));
    names.extend([3, 5, 7].iter().map(|p| format!("kop:{p}")));
    names.push("ko-homotopy".into());
    names
}

fn prime_suffix(name: &str, prefix: &str) -> Result<Option<u64>> {
    let Some(rest) = name.strip_prefix(prefix) else { return Ok(None) };
    let p: u64 = rest.parse().map_err(|_| ScenarioError::Unknown(name.to_string()))?;
    if !crate::arith::is_prime(p) || p == 2 || p > 13 {
        return Err(ScenarioError::Invalid(format!("{name}: expected an odd prime at most 13")));
    }
    Ok(Some(p))
}

pub fn named(name: &str, precision: u32) -> Result<ScenarioFile> {
    if let Some(p) = prime_suffix(name, "odd:")? {
        return odd(p, precision);
    }
    if let Some(p) = prime_suffix(name, "kop:")? {
        return ko_picard(p, precision);
    }
    match name {
        "p2" => p2(precision),
        "ko2" => ko_picard(2, precision),
        "ko2-descent" => ko2_descent(precision),
        "ko2nr" => ko2nr(precision),
        "ko-homotopy" => ko_homotopy(precision),
        _ => Err(ScenarioError::Unknown(name.to_string())),
    }
}

/// One line summarizing the answer of a scenario.
pub fn headline(file: &ScenarioFile, outcome: &Outcome) -> Result<String> {
    if file.name == "ko2" {
        let bound = outcome
            .readout("Br(KO_2|KU_2)")
            .and_then(|r| r.graded_order())
            .ok_or_else(|| ScenarioError::Invalid("ko2 has no finite (-1)-stem".into()))?;
        let route = ko2_lbr_route(file.precision, bound)?;
        return Ok(format!("Br(KO_2|KU_2) = {}", route.result));
    }
    let parts: Vec<String> = outcome
        .readouts
        .iter()
        .map(|r| {
            let mut s = format!("{} = {}", r.readout.name, r.rendered());
            if !r.readout.generators.is_empty() {
                let noun = if r.readout.generators.len() == 1 { "generator" } else { "generators" };
                s.push_str(&format!("; {noun} {}", r.readout.generators.join(", ")));
            }
            s
        })
        .collect();
    Ok(parts.join("; "))
}
