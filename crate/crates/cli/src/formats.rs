//! Text formats: edge lists, DL-vector files, leader lists and DOT export.
//!
//! Edge list: the first data line holds the node count `n`, every following
//! line one edge `u v` (0-based, whitespace separated). Everything after `#`
//! on a line is ignored, as are blank lines.
//!
//! DL file: one distance-to-leader vector per line, entries separated by
//! whitespace; `inf` (or `-`) marks a missing path.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use sscaug_core::pmi::DlMatrix;
use sscaug_core::{DiGraph, Dist, Edge, Error as CoreError, LeaderSet};

use crate::error::{CliError, Result};

/// Line-numbered parse failure, without a file name attached yet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            msg: msg.into(),
        }
    }

    pub fn at(self, path: &Path) -> CliError {
        CliError::Parse {
            path: path.to_path_buf(),
            line: self.line,
            msg: self.msg,
        }
    }
}

/// Non-empty, comment-stripped lines with their 1-based numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_index(token: &str, line: usize) -> std::result::Result<usize, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("expected a node index, found `{token}`")))
}

pub fn parse_edge_list(text: &str) -> std::result::Result<DiGraph, ParseError> {
    let mut lines = data_lines(text);
    let (first, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "missing node count"))?;
    let n: usize = header
        .parse()
        .map_err(|_| ParseError::new(first, format!("expected node count, found `{header}`")))?;
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [u, v] = tokens[..] else {
            return Err(ParseError::new(
                line,
                "expected exactly two node indices `u v`",
            ));
        };
        let (u, v) = (parse_index(u, line)?, parse_index(v, line)?);
        if let Some(bad) = [u, v].into_iter().find(|&x| x >= n) {
            return Err(ParseError::new(
                line,
                format!("node {bad} out of range for {n} nodes"),
            ));
        }
        if u == v {
            return Err(ParseError::new(line, format!("self-loop on node {u}")));
        }
        if !seen.insert((u, v)) {
            return Err(ParseError::new(line, format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v));
    }
    Ok(DiGraph::from_edges(n, edges).expect("edges validated line by line"))
}

pub fn write_edge_list(g: &DiGraph) -> String {
    let mut out = format!("{}\n", g.node_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_dl_file(text: &str) -> std::result::Result<DlMatrix, ParseError> {
    let mut rows = Vec::new();
    let mut width = None;
    for (line, content) in data_lines(text) {
        let row = content
            .split_whitespace()
            .map(|tok| match tok {
                "inf" | "INF" | "-" => Ok(Dist::Inf),
                _ => tok.parse().map(Dist::Finite).map_err(|_| {
                    ParseError::new(line, format!("expected a distance or `inf`, found `{tok}`"))
                }),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(ParseError::new(
                    line,
                    format!("expected {w} entries, found {}", row.len()),
                ))
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError::new(1, "no DL vectors found"));
    }
    DlMatrix::from_rows(rows).map_err(|e| ParseError::new(1, e.to_string()))
}

/// Comma-separated leader ids, e.g. `0,4,7`.
pub fn parse_leaders(spec: &str, n: usize) -> Result<LeaderSet> {
    let ids = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid leader id `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    LeaderSet::new(ids, n).map_err(|e| match e {
        CoreError::NodeOutOfRange { node, n } => {
            CliError::Usage(format!("leader {node} out of range for {n} nodes"))
        }
        other => CliError::Core(other),
    })
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn load_graph(path: &Path) -> Result<DiGraph> {
    parse_edge_list(&read_file(path)?).map_err(|e| e.at(path))
}

/// DOT rendering; leaders drawn as double circles, `added` edges in red.
pub fn to_dot(g: &DiGraph, leaders: Option<&LeaderSet>, added: &[Edge]) -> String {
    let mut out = String::from("digraph G {\n  node [shape=circle];\n");
    let mask = leaders.map(|l| l.mask(g.node_count()));
    for v in 0..g.node_count() {
        if mask.as_ref().is_some_and(|m| m[v]) {
            writeln!(out, "  {v} [shape=doublecircle];").unwrap();
        } else {
            writeln!(out, "  {v};").unwrap();
        }
    }
    let mut added = added.to_vec();
    added.sort_unstable();
    for (u, v) in g.edges() {
        if added.binary_search(&(u, v)).is_ok() {
            writeln!(out, "  {u} -> {v} [color=red];").unwrap();
        } else {
            writeln!(out, "  {u} -> {v};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
