//! Edge-list and DIMACS graph documents.
//!
//! Edge list: a header line `n m`, then `m` lines `u v` with `0 <= u, v < n`.
//! DIMACS: `p edge n m` followed by `e u v` lines, 1-indexed. Blank lines and
//! comments (`#` in edge lists, `c` in DIMACS) are ignored in both.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

/// Parses either format, choosing DIMACS when the first meaningful line
/// starts with `p` or `c`.
pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with('p') || l.starts_with('c') => parse_dimacs(text),
        _ => parse_edge_list(text),
    }
}

fn meaningful(text: &str, comment: impl Fn(&str) -> bool) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !comment(l))
}

fn number(line: usize, token: Option<&str>, what: &str) -> Result<u64, FormatError> {
    let token = token.ok_or_else(|| err(line, format!("missing {what}")))?;
    token.parse().map_err(|_| err(line, format!("{what} {token:?} is not a nonnegative integer")))
}

struct EdgeCollector {
    n: u64,
    edges: Vec<(Vertex, Vertex)>,
    seen: HashSet<(Vertex, Vertex)>,
}

impl EdgeCollector {
    fn new(n: u64) -> Self {
        EdgeCollector { n, edges: Vec::new(), seen: HashSet::new() }
    }

    fn add(&mut self, line: usize, u: u64, v: u64) -> Result<(), FormatError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(err(line, format!("vertex {x} out of range for n = {}", self.n)));
            }
        }
        if u == v {
            return Err(err(line, format!("self-loop at vertex {u}")));
        }
        let (a, b) = (u.min(v) as Vertex, u.max(v) as Vertex);
        if !self.seen.insert((a, b)) {
            return Err(err(line, format!("duplicate edge {a}-{b}")));
        }
        self.edges.push((a, b));
        Ok(())
    }

    fn finish(self, line: usize, m: u64) -> Result<Graph, FormatError> {
        if self.edges.len() as u64 != m {
            return Err(err(line, format!("header declares {m} edges but {} were listed", self.edges.len())));
        }
        Ok(Graph::from_edges(self.n as usize, &self.edges).expect("edges were validated"))
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = meaningful(text, |l| l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header \"n m\""))?;
    let mut tok = header.split_whitespace();
    let n = number(hline, tok.next(), "vertex count")?;
    let m = number(hline, tok.next(), "edge count")?;
    if tok.next().is_some() {
        return Err(err(hline, "header must be exactly \"n m\""));
    }
    if n > u32::MAX as u64 {
        return Err(err(hline, "vertex count too large"));
    }
    let mut c = EdgeCollector::new(n);
    let mut last = hline;
    for (line, l) in lines {
        let mut tok = l.split_whitespace();
        let u = number(line, tok.next(), "vertex")?;
        let v = number(line, tok.next(), "vertex")?;
        if tok.next().is_some() {
            return Err(err(line, "expected two vertices"));
        }
        c.add(line, u, v)?;
        last = line;
    }
    c.finish(last, m)
}

pub fn parse_dimacs(text: &str) -> Result<Graph, FormatError> {
    let mut collector: Option<(EdgeCollector, u64)> = None;
    let mut last = 1;
    for (line, l) in meaningful(text, |l| l.starts_with('c')) {
        last = line;
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("p") => {
                if collector.is_some() {
                    return Err(err(line, "second problem line"));
                }
                match tok.next() {
                    Some("edge") | Some("col") => {}
                    other => return Err(err(line, format!("unsupported problem type {other:?}"))),
                }
                let n = number(line, tok.next(), "vertex count")?;
                let m = number(line, tok.next(), "edge count")?;
                if n > u32::MAX as u64 {
                    return Err(err(line, "vertex count too large"));
                }
                collector = Some((EdgeCollector::new(n), m));
            }
            Some("e") => {
                let (c, _) = collector.as_mut().ok_or_else(|| err(line, "edge before the problem line"))?;
                let u = number(line, tok.next(), "vertex")?;
                let v = number(line, tok.next(), "vertex")?;
                if u == 0 || v == 0 {
                    return Err(err(line, "DIMACS vertices are 1-indexed"));
                }
                c.add(line, u - 1, v - 1)?;
            }
            Some(other) => return Err(err(line, format!("unknown line type {other:?}"))),
            None => {}
        }
    }
    let (c, m) = collector.ok_or_else(|| err(last, "missing problem line \"p edge n m\""))?;
    c.finish(last, m)
}

/// The canonical edge-list document for `g`.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
