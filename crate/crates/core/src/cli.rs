//! Command-line front end.
//!
//! Canonical results go to stdout, diagnostics to stderr. Exit codes: 0 on
//! success, 2 on invalid input, 3 when a computed result differs from the
//! declared expectation, 1 on any other failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::arith::{factor, is_prime};
use crate::cohomology::{marked, Factor, FactorKind, GAction, GroupSpec, TotalCohomology};
use crate::cyclic::{conjugation_semiring_coefficients, symbol_detect, twisted_fixed_algebra, GaloisRing};
use crate::fgab::local::GenOrder;
use crate::height1::{headline, named, parse_matrix, scenario_names, Outcome, ScenarioError, ScenarioFile};
use crate::sseq::{emit_chart, ChartFormat, SseqPage, Window};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Parse { .. } | ScenarioError::Invalid(_) | ScenarioError::Unknown(_) => {
                CliError::Input(e.to_string())
            }
            e => CliError::Failed(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// What a successful command prints and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { stdout, stderr: String::new(), code: 0 }
    }
}

#[derive(Parser, Debug)]
#[command(name = "descent", version, about = "Profinite cohomology, descent spectral sequences and cyclic algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continuous cohomology of a product of cyclic and procyclic groups.
    Cohomology(CohomologyArgs),
    /// Run a named scenario, `all`, or a scenario file.
    Scenario(ScenarioArgs),
    /// Finite cyclic algebras, symbols and conjugation tables.
    Cyclic {
        #[command(subcommand)]
        command: CyclicCommand,
    },
    /// Emit a chart of one page of a scenario.
    Chart(ChartArgs),
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    /// Group, e.g. `C2 x Zhat`, `Z3`, or `trivial`.
    pub group: String,
    /// Module, e.g. `Z/8`, `Z_2 + Z/4`.
    pub module: String,
    /// `trivial`, or one matrix per factor separated by `|`, rows by `;`.
    #[arg(default_value = "trivial")]
    pub action: String,
    #[arg(default_value_t = 2)]
    pub s_max: usize,
    /// Prime for free summands; inferred from the module when absent.
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long, default_value_t = 16)]
    pub precision: u32,
}

#[derive(Args, Debug)]
pub struct ScenarioArgs {
    /// Scenario name, `all`, or a path to a TOML scenario file.
    pub target: String,
    #[arg(long, default_value_t = 16)]
    pub precision: u32,
    /// Window override, `s0..S,tA..B`.
    #[arg(long)]
    pub window: Option<Window>,
    /// Print every page's stems.
    #[arg(long)]
    pub explain: bool,
    /// Write a chart of the chosen page here.
    #[arg(long)]
    pub chart: Option<PathBuf>,
    /// Page for `--chart`; the last page by default.
    #[arg(long)]
    pub page: Option<usize>,
    #[arg(long, default_value = "svg")]
    pub format: ChartFormat,
    /// Write the scenario as TOML here.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChartArgs {
    pub target: String,
    #[arg(long, default_value_t = 16)]
    pub precision: u32,
    #[arg(long)]
    pub window: Option<Window>,
    #[arg(long)]
    pub page: Option<usize>,
    #[arg(long, default_value = "text")]
    pub format: ChartFormat,
}

#[derive(Subcommand, Debug)]
pub enum CyclicCommand {
    /// `F9/F3 u=-1`: the fixed points of the twisted matrix algebra.
    Algebra { extension: String, params: Vec<String> },
    /// `p=3 v=omega`: the symbol of a unit against the Bockstein class.
    Symbol { params: Vec<String> },
    /// `k=2 j=1`: conjugation by powers of the companion matrix.
    Semiring { params: Vec<String> },
}

pub fn execute(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Cohomology(a) => cmd_cohomology(&a),
        Command::Scenario(a) => cmd_scenario(&a),
        Command::Cyclic { command } => cmd_cyclic(&command),
        Command::Chart(a) => cmd_chart(&a),
    }
}

fn at_column(column: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("parse error at column {column}: {msg}"))
}

/// Whitespace-separated words with their one-based columns.
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out.into_iter().map(|(i, w)| (text[..i].chars().count() + 1, w)).collect()
}

/// Parses `F1 x F2 x ...`; generators are named `g1, g2, ...`.
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let ws = words(text);
    if ws.is_empty() {
        return Err(at_column(1, "empty group"));
    }
    if ws.len() == 1 && matches!(ws[0].1, "trivial" | "1") {
        return Ok(GroupSpec::trivial());
    }
    let mut factors = Vec::new();
    for (i, &(col, w)) in ws.iter().enumerate() {
        if i % 2 == 1 {
            if w != "x" {
                return Err(at_column(col, format!("expected 'x', found {w:?}")));
            }
            continue;
        }
        let kind: FactorKind = w.replace('_', "").parse().map_err(|e| at_column(col, e))?;
        factors.push(Factor::new(kind, format!("g{}", factors.len() + 1)));
    }
    if ws.len() % 2 == 0 {
        let (col, w) = ws[ws.len() - 1];
        return Err(at_column(col + w.chars().count(), "expected a factor after 'x'"));
    }
    GroupSpec::new(factors).map_err(|e| CliError::Input(e.to_string()))
}

/// Parses `Z/8 + Z_2 + ...` into generator orders and the prime of any free summand.
pub fn parse_module(text: &str) -> Result<(Vec<GenOrder>, Option<u64>)> {
    if text.trim() == "0" {
        return Ok((Vec::new(), None));
    }
    let mut orders = Vec::new();
    let mut prime = None;
    let mut offset = 0;
    for part in text.split('+') {
        let lead = part.len() - part.trim_start().len();
        let col = text[..offset + lead].chars().count() + 1;
        offset += part.len() + 1;
        let w = part.trim();
        if let Some(n) = w.strip_prefix("Z/") {
            match n.parse::<u128>() {
                Ok(n) if n > 1 => orders.push(GenOrder::Finite(n)),
                Ok(_) => return Err(at_column(col, format!("{w}: order must exceed 1"))),
                Err(_) => return Err(at_column(col, format!("{w}: bad order"))),
            }
        } else if let Some(q) = w.strip_prefix("Z_") {
            let q: u64 = q.parse().map_err(|_| at_column(col, format!("{w}: bad prime")))?;
            if !is_prime(q) {
                return Err(at_column(col, format!("{w}: {q} is not prime")));
            }
            if prime.is_some_and(|p| p != q) {
                return Err(at_column(col, "free summands over different primes"));
            }
            prime = Some(q);
            orders.push(GenOrder::Free);
        } else {
            return Err(at_column(col, format!("expected Z/n or Z_p, found {w:?}")));
        }
    }
    Ok((orders, prime))
}

fn infer_prime(orders: &[GenOrder], free: Option<u64>, given: Option<u64>) -> Result<u64> {
    if let Some(p) = given {
        if !is_prime(p) {
            return Err(CliError::Input(format!("--prime {p} is not prime")));
        }
        return match free {
            Some(q) if q != p => Err(CliError::Input(format!("--prime {p} conflicts with Z_{q}"))),
            _ => Ok(p),
        };
    }
    if let Some(q) = free {
        return Ok(q);
    }
    Ok(orders
        .iter()
        .filter_map(|o| match o {
            GenOrder::Finite(n) => factor(*n).first().map(|&(q, _)| q),
            GenOrder::Free => None,
        })
        .min()
        .unwrap_or(2))
}

pub fn cmd_cohomology(a: &CohomologyArgs) -> Result<Report> {
    let group = parse_group(&a.group)?;
    let (orders, free) = parse_module(&a.module)?;
    let p = infer_prime(&orders, free, a.prime)?;
    let labels: Vec<String> = (1..=orders.len()).map(|i| format!("m{i}")).collect();
    let gens: Vec<(GenOrder, &str)> = orders.iter().copied().zip(labels.iter().map(String::as_str)).collect();
    let module = marked(p, a.precision, &gens);
    let action = if a.action.trim() == "trivial" {
        GAction::trivial(group.clone(), module)
    } else {
        let mats: Vec<_> = a
            .action
            .split('|')
            .map(|m| parse_matrix(m, module.len()))
            .collect::<std::result::Result<_, _>>()?;
        if mats.len() != group.factors().len() {
            return Err(CliError::Input(format!(
                "{} action matrices for {} factors",
                mats.len(),
                group.factors().len()
            )));
        }
        GAction::new(group.clone(), module, mats).map_err(|e| CliError::Input(e.to_string()))?
    };
    let h = TotalCohomology::compute(&action, a.s_max)
        .and_then(|c| c.structures())
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let parts: Vec<String> = h.iter().enumerate().map(|(s, m)| format!("H^{s} = {m}")).collect();
    Ok(Report::ok(parts.join("; ") + "\n"))
}

fn load(target: &str, precision: u32, window: Option<Window>) -> Result<ScenarioFile> {
    let path = Path::new(target);
    let mut file = if target.ends_with(".toml") || path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{target}: {e}")))?;
        let mut f = ScenarioFile::from_toml(&text)?;
        f.precision = precision;
        f
    } else {
        named(target, precision)?
    };
    if let Some(w) = window {
        file.window = w;
    }
    Ok(file)
}

fn mismatches(outcome: &Outcome) -> String {
    let mut s = String::new();
    for r in outcome.readouts.iter().filter(|r| !r.matches()) {
        let expected = r.readout.expected.as_deref().unwrap_or("-");
        let _ = writeln!(s, "mismatch: {} expected {expected}, computed {}", r.readout.name, r.rendered());
    }
    s
}

fn explain(outcome: &Outcome) -> Result<String> {
    let mut s = String::new();
    for page in outcome.ss.pages() {
        let _ = writeln!(s, "E_{}", page.r());
        let w = page.window();
        for stem in (w.t_min - w.s_max as i64)..=w.t_max {
            let mut cells = Vec::new();
            for (b, _) in page.entries().filter(|(b, e)| b.stem() == stem && !e.is_zero()) {
                let m = page.structure(b).map_err(|e| CliError::Failed(e.to_string()))?;
                if let Some(m) = m {
                    cells.push(format!("{b} {m}"));
                }
            }
            if !cells.is_empty() {
                let _ = writeln!(s, "  stem {stem}: {}", cells.join(", "));
            }
        }
    }
    Ok(s)
}

fn chosen_page(outcome: &Outcome, page: Option<usize>) -> Result<SseqPage> {
    match page {
        None => Ok(outcome.ss.final_page().clone()),
        Some(r) => outcome.ss.page(r).cloned().ok_or_else(|| {
            let last = outcome.ss.final_page().r();
            CliError::Input(format!("page {r} is not among E_2..E_{last}"))
        }),
    }
}

fn run_one(file: &ScenarioFile) -> Result<(Outcome, String)> {
    let outcome = file.run()?;
    let line = headline(file, &outcome)?;
    Ok((outcome, line))
}

pub fn cmd_scenario(a: &ScenarioArgs) -> Result<Report> {
    if a.target == "all" {
        return scenario_all(a.precision);
    }
    let file = load(&a.target, a.precision, a.window)?;
    if let Some(path) = &a.export {
        std::fs::write(path, file.to_toml()?).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
    }
    let (outcome, line) = run_one(&file)?;
    let mut out = format!("{line}\n");
    if !file.facts.is_empty() || !file.script.is_empty() {
        out.push_str("ledger:\n");
    }
    for e in &file.script {
        let _ = writeln!(out, "  d_{} {}: {}: {}", e.page, e.source, e.provenance.tag, e.provenance.source);
    }
    for f in &file.facts {
        let _ = writeln!(out, "  {}: {}", f.claim, f.anchor);
    }
    if a.explain {
        out.push_str(&explain(&outcome)?);
    }
    if let Some(path) = &a.chart {
        let page = chosen_page(&outcome, a.page)?;
        let doc = emit_chart(&page, outcome.ss.script(), a.format).map_err(|e| CliError::Failed(e.to_string()))?;
        std::fs::write(path, doc).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
    }
    let stderr = mismatches(&outcome);
    let code = if outcome.matches() { 0 } else { 3 };
    Ok(Report { stdout: out, stderr, code })
}

fn scenario_all(precision: u32) -> Result<Report> {
    let names = scenario_names();
    let results: Vec<Result<(String, String)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = names
            .iter()
            .map(|name| {
                scope.spawn(move || {
                    let file = named(name, precision)?;
                    let (outcome, line) = run_one(&file)?;
                    Ok((line, mismatches(&outcome)))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(CliError::Failed("worker panicked".into())))).collect()
    });
    let mut report = Report::ok(String::new());
    for (name, r) in names.iter().zip(results) {
        let (line, bad) = r?;
        let _ = writeln!(report.stdout, "{name}: {line}");
        if !bad.is_empty() {
            report.code = 3;
            let _ = write!(report.stderr, "{name}: {bad}");
        }
    }
    Ok(report)
}

pub fn cmd_chart(a: &ChartArgs) -> Result<Report> {
    let file = load(&a.target, a.precision, a.window)?;
    let outcome = file.run()?;
    let page = chosen_page(&outcome, a.page)?;
    let doc = emit_chart(&page, outcome.ss.script(), a.format).map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(Report::ok(doc))
}

/// `key=value` parameters; unknown keys are rejected.
fn params<'a>(given: &'a [String], allowed: &[&str]) -> Result<Vec<(&'a str, &'a str)>> {
    given
        .iter()
        .map(|g| {
            let (k, v) = g.split_once('=').ok_or_else(|| CliError::Input(format!("expected key=value, found {g:?}")))?;
            if !allowed.contains(&k) {
                return Err(CliError::Input(format!("unknown parameter {k:?}; expected one of {}", allowed.join(", "))));
            }
            Ok((k, v))
        })
        .collect()
}

fn param<T: std::str::FromStr>(ps: &[(&str, &str)], key: &str) -> Result<Option<T>> {
    ps.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.parse::<T>().map_err(|_| CliError::Input(format!("{key}={v}: bad value"))))
        .transpose()
}

fn required<T: std::str::FromStr>(ps: &[(&str, &str)], key: &str) -> Result<T> {
    param(ps, key)?.ok_or_else(|| CliError::Input(format!("missing {key}=")))
}

/// `Fq/Fp` as `(p, k)` with `q = p^k`.
fn parse_extension(text: &str) -> Result<(u64, usize)> {
    let bad = || CliError::Input(format!("expected Fq/Fp, found {text:?}"));
    let (top, bottom) = text.split_once('/').ok_or_else(bad)?;
    let q: u64 = top.strip_prefix('F').and_then(|x| x.parse().ok()).ok_or_else(bad)?;
    let p: u64 = bottom.strip_prefix('F').and_then(|x| x.parse().ok()).ok_or_else(bad)?;
    if !is_prime(p) {
        return Err(CliError::Input(format!("F{p}: the base must be a prime field")));
    }
    let mut k = 0;
    let mut r = q;
    while r > 1 && r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 || k == 0 {
        return Err(CliError::Input(format!("{q} is not a power of {p}")));
    }
    Ok((p, k))
}

pub fn cmd_cyclic(c: &CyclicCommand) -> Result<Report> {
    match c {
        CyclicCommand::Algebra { extension, params: given } => {
            let (p, k) = parse_extension(extension)?;
            let ps = params(given, &["u"])?;
            let u: i128 = required(&ps, "u")?;
            let residue = u.rem_euclid(p as i128) as u128;
            if residue == 0 {
                return Err(CliError::Input(format!("u={u} is not a unit mod {p}")));
            }
            let ring = GaloisRing::field(p, k).map_err(|e| CliError::Input(e.to_string()))?;
            let algebra =
                twisted_fixed_algebra(&ring, &ring.from_base(residue)).map_err(|e| CliError::Failed(e.to_string()))?;
            let center = match algebra.center_dimension {
                1 => format!("F_{p}"),
                d => format!("dimension {d} over F_{p}"),
            };
            let splits = if algebra.splits() { "idempotent found" } else { "no rank-one idempotent" };
            let stdout = format!("rank {}, center {center}, splits: {splits}\n", algebra.rank());
            let ok = algebra.rank() == k * k && algebra.center_dimension == 1 && algebra.splits();
            Ok(Report { stdout, stderr: String::new(), code: if ok { 0 } else { 3 } })
        }
        CyclicCommand::Symbol { params: given } => {
            let ps = params(given, &["p", "v"])?;
            let p: u64 = required(&ps, "p")?;
            if p == 2 || !is_prime(p) {
                return Err(CliError::Input(format!("p={p}: expected an odd prime")));
            }
            let v: i128 = match param::<String>(&ps, "v")?.as_deref() {
                None | Some("omega") => 1,
                Some(x) => x.parse().map_err(|_| CliError::Input(format!("v={x}: expected omega or an integer")))?,
            };
            let module = marked(p, 16, &[(GenOrder::Finite(p as u128 - 1), "omega")]);
            let id = module.identity();
            let s = symbol_detect(p - 1, 1, &module, &id, &[v]).map_err(|e| CliError::Failed(e.to_string()))?;
            let stdout = if s.nonzero { format!("nonzero, order {}\n", s.order) } else { "zero\n".to_string() };
            Ok(Report::ok(stdout))
        }
        CyclicCommand::Semiring { params: given } => {
            let ps = params(given, &["k", "j"])?;
            let k: usize = required(&ps, "k")?;
            let j: usize = required(&ps, "j")?;
            if k == 0 {
                return Err(CliError::Input("k must be positive".into()));
            }
            let table = conjugation_semiring_coefficients(k, j);
            let mut out = String::new();
            for (&(s, t), m) in &table.images {
                let rows: Vec<String> =
                    m.0.iter().map(|r| r.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")).collect();
                let _ = writeln!(out, "e{}{} -> [{}]", s + 1, t + 1, rows.join("; "));
            }
            let ok = table.all_zero_or_one();
            let _ = writeln!(out, "coefficients in {{0, 1}}: {}", if ok { "yes" } else { "no" });
            Ok(Report { stdout: out, stderr: String::new(), code: if ok { 0 } else { 3 } })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Report> {
        let cli = Cli::try_parse_from(std::iter::once("descent").chain(args.iter().copied()))
            .map_err(|e| CliError::Input(e.to_string()))?;
        execute(cli)
    }

    #[test]
    fn cohomology_examples() {
        let r = run(&["cohomology", "Z2 x Zhat", "Z/8", "trivial", "2"]).unwrap();
        assert_eq!(r.stdout.trim(), "H^0 = Z/8; H^1 = Z/8 + Z/8; H^2 = Z/8");
        let r = run(&["cohomology", "C2 x Zhat", "Z/8", "trivial", "2"]).unwrap();
        assert_eq!(r.stdout.trim(), "H^0 = Z/8; H^1 = Z/8 + Z/2; H^2 = Z/2 + Z/2");
        let r = run(&["cohomology", "Z3", "Z/2", "trivial", "3"]).unwrap();
        assert_eq!(r.stdout.trim(), "H^0 = Z/2; H^1 = 0; H^2 = 0; H^3 = 0");
        let r = run(&["cohomology", "trivial", "Z/4 + Z/2", "trivial", "2"]).unwrap();
        assert_eq!(r.stdout.trim(), "H^0 = Z/4 + Z/2; H^1 = 0; H^2 = 0");
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = run(&["cohomology", "C2 y Zhat", "Z/8"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("column 4"), "{e}");
        let e = run(&["cohomology", "C2 x Q", "Z/8"]).unwrap_err();
        assert!(e.to_string().contains("column 6"), "{e}");
        let e = run(&["cohomology", "C2", "Z/8 + Y"]).unwrap_err();
        assert!(e.to_string().contains("column 7"), "{e}");
    }

    #[test]
    fn scenarios_report_headlines() {
        let r = run(&["scenario", "odd:3"]).unwrap();
        assert_eq!(r.code, 0);
        assert!(r.stdout.starts_with("Br_1^0 = Z/2; generator (KU_p^h(1+pZp), chi, omega)"), "{}", r.stdout);
        assert!(r.stdout.contains("ledger:"));
        let r = run(&["scenario", "p2"]).unwrap();
        assert!(r.stdout.starts_with("Br_1^0 = Z/8 + Z/4; generators Q_1, Q_2\n"));
        let r = run(&["scenario", "ko2"]).unwrap();
        assert!(r.stdout.starts_with("Br(KO_2|KU_2) = Z/4\n"));
        assert_eq!(run(&["scenario", "nope"]).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn mismatch_exits_three() {
        let dir = std::env::temp_dir().join(format!("descent-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let mut file = named("odd:5", 16).unwrap();
        file.readouts[0].expected = Some("Z/2".into());
        let path = dir.join("odd5.toml");
        std::fs::write(&path, file.to_toml().unwrap()).unwrap();
        let r = run(&["scenario", path.to_str().unwrap()]).unwrap();
        assert_eq!(r.code, 3);
        assert!(r.stderr.contains("mismatch"));
        std::fs::write(&path, "name = [").unwrap();
        let e = run(&["scenario", path.to_str().unwrap()]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("line 1"), "{e}");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn cyclic_examples() {
        let r = run(&["cyclic", "algebra", "F9/F3", "u=-1"]).unwrap();
        assert_eq!(r.stdout.trim(), "rank 4, center F_3, splits: idempotent found");
        let r = run(&["cyclic", "symbol", "p=3", "v=omega"]).unwrap();
        assert_eq!(r.stdout.trim(), "nonzero, order 2");
        let r = run(&["cyclic", "semiring", "k=2", "j=1"]).unwrap();
        assert_eq!(r.code, 0);
        assert!(r.stdout.contains("e12 -> [0 0; u^-1 0]"), "{}", r.stdout);
        assert!(r.stdout.ends_with("coefficients in {0, 1}: yes\n"));
        assert_eq!(run(&["cyclic", "algebra", "F8/F4", "u=1"]).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn chart_is_deterministic() {
        let a = run(&["chart", "odd:3", "--page", "2"]).unwrap();
        let b = run(&["chart", "odd:3", "--page", "2"]).unwrap();
        assert_eq!(a, b);
        assert!(a.stdout.starts_with("# "));
    }
}
