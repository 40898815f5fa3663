//! Edge-list text format.
//!
//! ```text
//! # comment lines start with '#'
//! n m
//! u v w      (m lines, 0-based vertices, decimal weight)
//! ```

use std::fmt::Write as _;

use super::WeightedGraph;
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &[u8]) -> Result<impl Iterator<Item = (usize, &str)>> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let line = 1 + text[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count();
        parse_err(line, "input is not valid UTF-8")
    })?;
    Ok(text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')))
}

fn field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

impl WeightedGraph {
    pub fn parse_edge_list(text: &[u8]) -> Result<Self> {
        let mut lines = content_lines(text)?;
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let mut toks = header.split_ascii_whitespace();
        let n: usize = field(hline, toks.next(), "vertex count")?;
        let m: usize = field(hline, toks.next(), "edge count")?;
        if toks.next().is_some() {
            return Err(parse_err(hline, "trailing tokens in header"));
        }
        if n == 0 {
            return Err(parse_err(hline, "vertex count must be positive"));
        }

        let mut edges = Vec::with_capacity(m.min(1 << 20));
        let mut seen = std::collections::HashSet::new();
        for (line, body) in lines {
            if edges.len() == m {
                return Err(parse_err(line, format!("more than {m} edge lines")));
            }
            let mut toks = body.split_ascii_whitespace();
            let u: usize = field(line, toks.next(), "vertex")?;
            let v: usize = field(line, toks.next(), "vertex")?;
            let w: f64 = field(line, toks.next(), "weight")?;
            if toks.next().is_some() {
                return Err(parse_err(line, "trailing tokens"));
            }
            if u >= n || v >= n {
                return Err(parse_err(
                    line,
                    format!("vertex {} out of range for n = {n}", u.max(v)),
                ));
            }
            if u == v {
                return Err(Error::SelfLoop { v: u });
            }
            let (a, b) = (u.min(v), u.max(v));
            if !w.is_finite() && w > 0.0 {
                return Err(parse_err(line, "weight must be finite"));
            }
            if !(w > 0.0) {
                return Err(Error::NonPositiveWeight { u: a, v: b, w });
            }
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateEdge { u: a, v: b });
            }
            edges.push((a, b, w));
        }
        if edges.len() != m {
            return Err(parse_err(
                hline,
                format!("header declares {m} edges, found {}", edges.len()),
            ));
        }
        Self::new(n, edges)
    }

    /// Canonical edge-list text. Weights use the shortest representation that
    /// parses back to the same `f64`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.edges.len()).unwrap();
        for e in &self.edges {
            writeln!(out, "{} {} {}", e.u, e.v, e.w).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle() {
        let g = WeightedGraph::parse_edge_list(b"3 3\n0 1 1\n0 2 1\n1 2 1\n").unwrap();
        assert_eq!(
            g,
            WeightedGraph::unweighted(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
        );
    }

    #[test]
    fn rejects_forbidden_input() {
        assert_eq!(
            WeightedGraph::parse_edge_list(b"2 1\n0 0 1\n"),
            Err(Error::SelfLoop { v: 0 })
        );
        assert!(matches!(
            WeightedGraph::parse_edge_list(b"2 1\n0 1 -2\n"),
            Err(Error::NonPositiveWeight { w, .. }) if w == -2.0
        ));
        assert_eq!(
            WeightedGraph::parse_edge_list(b"3 2\n0 1 1\n1 0 3\n"),
            Err(Error::DuplicateEdge { u: 0, v: 1 })
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = WeightedGraph::parse_edge_list(b"# hdr\n3 2\n0 1 1\n0 x 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
        let err = WeightedGraph::parse_edge_list(b"3 2\n0 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
        let err = WeightedGraph::parse_edge_list(b"3 1\n0 1 1\n1 2 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = WeightedGraph::parse_edge_list(b"3 1\n0 5 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        assert!(WeightedGraph::parse_edge_list(b"").is_err());
        assert!(WeightedGraph::parse_edge_list(b"2 1\n0 1 inf\n").is_err());
        assert!(WeightedGraph::parse_edge_list(b"2 1\n0 1 NaN\n").is_err());
        assert!(WeightedGraph::parse_edge_list(&[0xff, b'\n']).is_err());
    }

    #[test]
    fn comments_are_ignored() {
        let g =
            WeightedGraph::parse_edge_list(b"# triangle\n3 3\n0 1 1\n# mid\n0 2 1\n1 2 1\n")
                .unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(WeightedGraph::new(2, []).unwrap().to_edge_list(), "2 0\n");
        let p3 = WeightedGraph::new(3, [(2, 1, 0.1), (1, 0, 3.0)]).unwrap();
        assert_eq!(p3.to_edge_list(), "3 2\n0 1 3\n1 2 0.1\n");
        let k3 = WeightedGraph::unweighted(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(
            WeightedGraph::parse_edge_list(k3.to_edge_list().as_bytes()).unwrap(),
            k3
        );
    }
}
