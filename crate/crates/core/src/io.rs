//! Plain-text dataset formats and artifact writers.
//!
//! * binary matrix: headerless CSV of `0`/`1`, one row per object;
//! * graph: whitespace-separated edge list `u v [w]`, 0-indexed, with an
//!   optional `# nodes N` line fixing the node count;
//! * points: headerless CSV of reals, one row per point.
//!
//! Lines starting with `#` are comments. Written CSV artifacts start with a
//! `# config: {...}` line.

use std::fmt::Write as _;
use std::path::Path;

use crate::data::{BinaryMatrix, Graph, PointCloud};
use crate::error::{Result, TangleError};
use crate::postprocess::SoftAssignment;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> TangleError {
    TangleError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_binary_matrix(text: &str) -> Result<BinaryMatrix> {
    let mut rows = Vec::new();
    let mut cols = None;
    for (line, l) in data_lines(text) {
        let row = l
            .split(',')
            .map(|t| match t.trim() {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                other => Err(parse_err(line, format!("expected 0 or 1, found '{other}'"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(parse_err(line, format!("expected {c} columns, found {}", row.len())))
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(0, "no data rows"));
    }
    BinaryMatrix::from_rows(&rows)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared = None;
    for (i, l) in text.lines().enumerate() {
        if let Some(rest) = l.trim().strip_prefix('#') {
            let mut it = rest.split_whitespace();
            if it.next() == Some("nodes") {
                let n = it
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| parse_err(i + 1, "malformed '# nodes N' line"))?;
                declared = Some(n);
            }
        }
    }
    let mut edges = Vec::new();
    let mut max_index = None;
    for (line, l) in data_lines(text) {
        let tok: Vec<&str> = l.split_whitespace().collect();
        if !(2..=3).contains(&tok.len()) {
            return Err(parse_err(line, "expected 'u v' or 'u v w'"));
        }
        let idx = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line, format!("bad node index '{t}'")))
        };
        let (u, v) = (idx(tok[0])?, idx(tok[1])?);
        let w = match tok.get(2) {
            Some(t) => t
                .parse::<f64>()
                .map_err(|_| parse_err(line, format!("bad weight '{t}'")))?,
            None => 1.0,
        };
        max_index = Some(max_index.unwrap_or(0).max(u).max(v));
        edges.push((u, v, w));
    }
    let n = match (declared, max_index) {
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => return Err(parse_err(0, "empty edge list without '# nodes N'")),
    };
    Graph::new(n, edges)
}

pub fn parse_points(text: &str) -> Result<PointCloud> {
    let mut rows = Vec::new();
    for (line, l) in data_lines(text) {
        let row = l
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(line, format!("bad number '{}'", t.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first().map(|r: &Vec<f64>| r.len()) {
            if first != row.len() {
                return Err(parse_err(line, format!("expected {first} columns, found {}", row.len())));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(0, "no data rows"));
    }
    PointCloud::from_rows(&rows)
}

pub fn format_binary_matrix(x: &BinaryMatrix) -> String {
    let mut s = String::new();
    for r in 0..x.rows() {
        let row: Vec<String> = x.row(r).iter().map(|v| v.to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut s = format!("# nodes {}\n", g.num_nodes());
    for &(u, v, w) in g.edges() {
        if w == 1.0 {
            let _ = writeln!(s, "{u} {v}");
        } else {
            let _ = writeln!(s, "{u} {v} {w}");
        }
    }
    s
}

pub fn format_points(p: &PointCloud) -> String {
    let mut s = String::new();
    for i in 0..p.len() {
        let row: Vec<String> = p.point(i).iter().map(|v| v.to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// `# config: {json}` line echoed at the top of CSV artifacts.
pub fn config_comment(config: &serde_json::Value) -> String {
    format!("# config: {config}\n")
}

/// Single-column CSV with a `label` header.
pub fn format_labels(labels: &[usize], config: Option<&serde_json::Value>) -> String {
    let mut s = config.map(config_comment).unwrap_or_default();
    s.push_str("label\n");
    for l in labels {
        let _ = writeln!(s, "{l}");
    }
    s
}

pub fn parse_labels(text: &str) -> Result<Vec<usize>> {
    data_lines(text)
        .filter(|(_, l)| *l != "label")
        .map(|(line, l)| {
            l.parse::<usize>()
                .map_err(|_| parse_err(line, format!("bad label '{l}'")))
        })
        .collect()
}

/// Soft matrix CSV; the header lists the condensed node ids.
pub fn format_soft(soft: &SoftAssignment, config: Option<&serde_json::Value>) -> String {
    let mut s = config.map(config_comment).unwrap_or_default();
    let header: Vec<String> = soft.columns.iter().map(|c| c.to_string()).collect();
    s.push_str(&header.join(","));
    s.push('\n');
    for row in &soft.rows {
        let r: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

pub fn read_to_string(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
