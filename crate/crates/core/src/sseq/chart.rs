use std::fmt::Write as _;

use crate::arith::split_p_part;
use crate::fgab::local::{GenOrder, MarkedModule};
use crate::sseq::{Bidegree, DifferentialScript, Provenance, Result, ScriptEntry, SseqError, SseqPage, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartFormat {
    Text,
    Svg,
}

impl std::str::FromStr for ChartFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(ChartFormat::Text),
            "svg" => Ok(ChartFormat::Svg),
            _ => Err(format!("unknown chart format {s:?}")),
        }
    }
}

const CIRCLED: [char; 9] = ['①', '②', '③', '④', '⑤', '⑥', '⑦', '⑧', '⑨'];

fn glyphs(m: &MarkedModule) -> Result<String> {
    let st = m.structure()?;
    let p = m.p();
    let mut out = String::new();
    for _ in 0..st.free_rank() {
        out.push('□');
    }
    for &d in st.torsion().iter().rev() {
        let (pk, rest) = split_p_part(d, p);
        if pk > 1 {
            let k = crate::arith::valuation(pk, p).unwrap_or(0) as usize;
            out.push(if k == 1 { '○' } else { CIRCLED[k.min(9) - 1] });
        }
        if rest > 1 {
            out.push('×');
        }
    }
    Ok(out)
}

fn check_text(field: &str, what: &str) -> Result<()> {
    if field.contains(['|', ';', '\n']) || field.is_empty() {
        return Err(SseqError::Script(format!("{what} {field:?} cannot be written to a chart")));
    }
    Ok(())
}

fn order_text(o: &GenOrder) -> String {
    match o {
        GenOrder::Free => "inf".into(),
        GenOrder::Finite(n) => n.to_string(),
    }
}

fn rows_text(rows: &[Vec<i128>]) -> String {
    let parts: Vec<String> =
        rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(";")
    }
}

fn stems(w: &Window) -> (i64, i64) {
    (w.t_min - w.s_max as i64, w.t_max)
}

/// Renders a page and the differentials scripted on it.
pub fn emit_chart(page: &SseqPage, script: &DifferentialScript, format: ChartFormat) -> Result<String> {
    match format {
        ChartFormat::Text => emit_text(page, script),
        ChartFormat::Svg => emit_svg(page, script),
    }
}

fn emit_text(page: &SseqPage, script: &DifferentialScript) -> Result<String> {
    let w = page.window();
    check_text(page.name(), "scenario name")?;
    if page.name().contains(' ') {
        return Err(SseqError::Script("scenario name contains a space".into()));
    }
    let mut out = String::new();
    writeln!(out, "# scenario={} page={} window={} p={} precision={}", page.name(), page.r(), w, page.p(), page.precision())
        .expect("string write");
    let (x0, x1) = stems(&w);
    let mut cells: Vec<Vec<String>> = Vec::new();
    for s in (0..=w.s_max).rev() {
        let mut row = Vec::new();
        for x in x0..=x1 {
            let b = Bidegree::new(s, x + s as i64);
            let g = match page.module(b) {
                Some(m) if !m.is_empty() => glyphs(m)?,
                Some(_) => "·".into(),
                None => " ".into(),
            };
            row.push(g);
        }
        cells.push(row);
    }
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1).max(3);
    for (i, row) in cells.iter().enumerate() {
        let s = w.s_max - i;
        let mut line = format!("{s:>3} |");
        for c in row {
            let pad = width - c.chars().count();
            line.push(' ');
            line.push_str(&" ".repeat(pad));
            line.push_str(c);
        }
        writeln!(out, "{}", line.trim_end()).expect("string write");
    }
    let mut axis = String::from("    +");
    for x in x0..=x1 {
        write!(axis, " {x:>width$}").expect("string write");
    }
    writeln!(out, "{axis}").expect("string write");
    writeln!(out, "## entries").expect("string write");
    for (b, e) in page.entries() {
        let m = e.module();
        if m.is_empty() {
            continue;
        }
        for l in m.labels() {
            check_text(l, "label")?;
        }
        let orders: Vec<String> = m.orders().iter().map(order_text).collect();
        writeln!(out, "{b} | {} | {}", orders.join(","), m.labels().join(";")).expect("string write");
    }
    writeln!(out, "## differentials").expect("string write");
    for e in script.on_page(page.r()) {
        check_text(&e.provenance.source, "source")?;
        let declared: Vec<String> = e.declared_rows.iter().map(|i| i.to_string()).collect();
        let declared = if declared.is_empty() { "-".into() } else { declared.join(",") };
        writeln!(
            out,
            "d_{} {} -> {} | {} | {} | {} | {}",
            e.page,
            e.source,
            e.target,
            e.provenance.tag,
            rows_text(&e.matrix),
            declared,
            e.provenance.source
        )
        .expect("string write");
    }
    Ok(out)
}

fn emit_svg(page: &SseqPage, script: &DifferentialScript) -> Result<String> {
    const CELL: i64 = 40;
    const MARGIN: i64 = 30;
    let w = page.window();
    let (x0, x1) = stems(&w);
    let cols = x1 - x0 + 1;
    let rows = w.s_max as i64 + 1;
    let width = 2 * MARGIN + cols * CELL;
    let height = 2 * MARGIN + rows * CELL;
    let px = |x: i64| MARGIN + (x - x0) * CELL + CELL / 2;
    let py = |s: i64| MARGIN + (rows - 1 - s) * CELL + CELL / 2;
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">"#).expect("string write");
    writeln!(out, "<title>{} E_{}</title>", page.name(), page.r()).expect("string write");
    for x in x0..=x1 {
        writeln!(out, r#"<text x="{}" y="{}" font-size="10">{x}</text>"#, px(x) - 4, height - 8).expect("string write");
    }
    for s in 0..rows {
        writeln!(out, r#"<text x="4" y="{}" font-size="10">{s}</text>"#, py(s) + 4).expect("string write");
    }
    for (b, e) in page.entries() {
        let m = e.module();
        if m.is_empty() {
            continue;
        }
        let g = glyphs(m)?;
        let n = g.chars().count() as i64;
        for (i, c) in g.chars().enumerate() {
            let cx = px(b.stem()) + (2 * i as i64 - (n - 1)) * 5;
            let cy = py(b.s as i64);
            let shape = match c {
                '□' => format!(r#"<rect x="{}" y="{}" width="8" height="8" fill="none" stroke="black"/>"#, cx - 4, cy - 4),
                '×' => format!(r#"<text x="{}" y="{}" font-size="10">x</text>"#, cx - 3, cy + 3),
                '○' => format!(r#"<circle cx="{cx}" cy="{cy}" r="3" fill="black"/>"#),
                _ => {
                    let k = CIRCLED.iter().position(|d| *d == c).map_or(1, |k| k + 1);
                    format!(r#"<circle cx="{cx}" cy="{cy}" r="4" fill="none" stroke="black"/><text x="{}" y="{}" font-size="6">{k}</text>"#, cx - 2, cy + 2)
                }
            };
            writeln!(out, "{shape}").expect("string write");
        }
    }
    for e in script.on_page(page.r()) {
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="blue"/>"#,
            px(e.source.stem()),
            py(e.source.s as i64),
            px(e.target.stem()),
            py(e.target.s as i64)
        )
        .expect("string write");
    }
    writeln!(out, "</svg>").expect("string write");
    Ok(out)
}

/// A page and its differentials read back from a text chart.
#[derive(Clone, Debug)]
pub struct ParsedChart {
    pub page: SseqPage,
    pub script: DifferentialScript,
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> SseqError {
    SseqError::Script(format!("chart line {line}: {msg}"))
}

fn parse_bidegree(text: &str, line: usize) -> Result<Bidegree> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| parse_err(line, format!("bad bidegree {text:?}")))?;
    let (s, t) = inner.split_once(',').ok_or_else(|| parse_err(line, format!("bad bidegree {text:?}")))?;
    let s = s.trim().parse().map_err(|e| parse_err(line, e))?;
    let t = t.trim().parse().map_err(|e| parse_err(line, e))?;
    Ok(Bidegree::new(s, t))
}

pub fn parse_chart(text: &str) -> Result<ParsedChart> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (n, header) = lines.next().ok_or_else(|| parse_err(1, "empty chart"))?;
    let header = header.strip_prefix("# ").ok_or_else(|| parse_err(n, "missing header"))?;
    let field = |key: &str| -> Result<&str> {
        header
            .split(' ')
            .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
            .ok_or_else(|| parse_err(n, format!("header lacks {key}")))
    };
    let name = field("scenario")?;
    let r: usize = field("page")?.parse().map_err(|e| parse_err(n, e))?;
    let window: Window = field("window")?.parse().map_err(|e: String| parse_err(n, e))?;
    let p: u64 = field("p")?.parse().map_err(|e| parse_err(n, e))?;
    let precision: u32 = field("precision")?.parse().map_err(|e| parse_err(n, e))?;
    let mut page = SseqPage::new(name, r, p, precision, window);
    let mut script = DifferentialScript::default();
    let mut section = "";
    for (n, line) in lines {
        if line == "## entries" || line == "## differentials" {
            section = line;
            continue;
        }
        match section {
            "## entries" => {
                let parts: Vec<&str> = line.splitn(3, " | ").collect();
                let [b, orders, labels] = parts[..] else { return Err(parse_err(n, "entry needs 3 fields")) };
                let b = parse_bidegree(b, n)?;
                let orders = orders
                    .split(',')
                    .map(|o| match o {
                        "inf" => Ok(GenOrder::Free),
                        _ => o.parse().map(GenOrder::Finite).map_err(|e| parse_err(n, e)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let labels = labels.split(';').map(str::to_string).collect();
                let m = MarkedModule::new(p, precision, orders, labels).map_err(|e| parse_err(n, e))?;
                page.set_module(b, m)?;
            }
            "## differentials" => {
                let parts: Vec<&str> = line.splitn(5, " | ").collect();
                let [head, tag, rows, declared, source] = parts[..] else {
                    return Err(parse_err(n, "differential needs 5 fields"));
                };
                let rest = head.strip_prefix("d_").ok_or_else(|| parse_err(n, "differential must start with d_"))?;
                let (page_no, rest) = rest.split_once(' ').ok_or_else(|| parse_err(n, "bad differential"))?;
                let (src, tgt) = rest.split_once(" -> ").ok_or_else(|| parse_err(n, "bad differential"))?;
                let matrix = if rows == "-" {
                    Vec::new()
                } else {
                    rows.split(';')
                        .map(|r| {
                            r.split(' ')
                                .filter(|x| !x.is_empty())
                                .map(|x| x.parse::<i128>().map_err(|e| parse_err(n, e)))
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()?
                };
                let declared_rows = if declared == "-" {
                    Vec::new()
                } else {
                    declared.split(',').map(|x| x.parse().map_err(|e| parse_err(n, e))).collect::<Result<Vec<_>>>()?
                };
                script.push(ScriptEntry {
                    page: page_no.parse().map_err(|e| parse_err(n, e))?,
                    source: parse_bidegree(src, n)?,
                    target: parse_bidegree(tgt, n)?,
                    matrix,
                    provenance: Provenance { tag: tag.parse().map_err(|e: String| parse_err(n, e))?, source: source.into() },
                    declared_rows,
                });
            }
            _ => {}
        }
    }
    Ok(ParsedChart { page, script })
}
