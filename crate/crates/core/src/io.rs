//! Line-oriented graph files and CSV score output.
//!
//! ```text
//! # comment
//! n <id> <module>
//! e <u> <v> <weight>
//! ```
//!
//! Node lines come first, with ids `0, 1, 2, ...` in order. Weights are positive
//! decimals. Blank lines are skipped.

use std::fmt::Write as _;

use crate::centrality::CentralityVector;
use crate::coarse::CoarseReport;
use crate::graph::{Edge, Graph, GraphError};
use crate::modular::GlobalCentralityReport;

fn syntax(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn parse_graph_file(text: &[u8]) -> Result<Graph, GraphError> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let line = 1 + text[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        syntax(line, "invalid UTF-8")
    })?;

    let mut modules = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "n" => {
                if !edges.is_empty() {
                    return Err(syntax(line, "node lines must precede edge lines"));
                }
                let [_, id, module] = fields[..] else {
                    return Err(syntax(line, "expected `n <id> <module>`"));
                };
                let id: usize = id
                    .parse()
                    .map_err(|_| syntax(line, format!("bad node id `{id}`")))?;
                let module: usize = module
                    .parse()
                    .map_err(|_| syntax(line, format!("bad module index `{module}`")))?;
                if id != modules.len() {
                    return Err(syntax(
                        line,
                        format!("expected node id {}, found {id}", modules.len()),
                    ));
                }
                modules.push(module);
            }
            "e" => {
                let [_, u, v, w] = fields[..] else {
                    return Err(syntax(line, "expected `e <u> <v> <weight>`"));
                };
                let u: usize = u
                    .parse()
                    .map_err(|_| syntax(line, format!("bad node id `{u}`")))?;
                let v: usize = v
                    .parse()
                    .map_err(|_| syntax(line, format!("bad node id `{v}`")))?;
                let w: f64 = w
                    .parse()
                    .map_err(|_| syntax(line, format!("bad weight `{w}`")))?;
                edges.push(Edge::new(u, v, w));
            }
            other => return Err(syntax(line, format!("unknown record type `{other}`"))),
        }
    }
    Graph::build(modules.len(), &edges, modules)
}

/// Inverse of [`parse_graph_file`]. Weights use the shortest representation that
/// parses back to the same `f64`.
pub fn serialize_graph(g: &Graph, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        for line in h.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for v in 0..g.node_count() {
        let _ = writeln!(out, "n {v} {}", g.module_of(v));
    }
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u, e.v, e.weight);
    }
    out
}

/// `%.9g`: nine significant digits, trailing zeros trimmed.
pub fn format_score(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    let body = if !(-4..9).contains(&exp) {
        let frac = digits[1..].trim_end_matches('0');
        let mut s = digits[..1].to_string();
        if !frac.is_empty() {
            s.push('.');
            s.push_str(frac);
        }
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{s}e{sign}{:02}", exp.abs())
    } else if exp >= 0 {
        let split = exp as usize + 1;
        let frac = digits[split..].trim_end_matches('0');
        if frac.is_empty() {
            digits[..split].to_string()
        } else {
            format!("{}.{frac}", &digits[..split])
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("0.{zeros}{}", digits.trim_end_matches('0'))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// `node,module,bc`
pub fn bc_csv(g: &Graph, bc: &CentralityVector) -> String {
    let mut out = String::from("node,module,bc\n");
    for (v, s) in bc.scores.iter().enumerate() {
        let _ = writeln!(out, "{v},{},{}", g.module_of(v), format_score(*s));
    }
    out
}

/// `node,module,lc,ec,gc`
pub fn modular_csv(
    g: &Graph,
    lc: &CentralityVector,
    ec: &CentralityVector,
    gc: &CentralityVector,
) -> String {
    let mut out = String::from("node,module,lc,ec,gc\n");
    for v in 0..g.node_count() {
        let _ = writeln!(
            out,
            "{v},{},{},{},{}",
            g.module_of(v),
            format_score(lc.scores[v]),
            format_score(ec.scores[v]),
            format_score(gc.scores[v])
        );
    }
    out
}

pub fn report_csv(g: &Graph, r: &GlobalCentralityReport) -> String {
    modular_csv(g, &r.lc, &r.ec, &r.gc)
}

/// `module,ec_module`
pub fn module_csv(ec_module: &[f64]) -> String {
    let mut out = String::from("module,ec_module\n");
    for (m, s) in ec_module.iter().enumerate() {
        let _ = writeln!(out, "{m},{}", format_score(*s));
    }
    out
}

/// `node,module,ic,ec,coarse_gc`
pub fn coarse_csv(g: &Graph, r: &CoarseReport) -> String {
    let mut out = String::from("node,module,ic,ec,coarse_gc\n");
    for v in 0..g.node_count() {
        let _ = writeln!(
            out,
            "{v},{},{},{},{}",
            g.module_of(v),
            format_score(r.ic.scores[v]),
            format_score(r.node_ec[v]),
            format_score(r.coarse_gc.scores[v])
        );
    }
    out
}
