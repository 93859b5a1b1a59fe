//! Graph and sequence file formats: a plain edge list, the graph6 ASCII
//! encoding used by exhaustive small-graph corpora, and the JSON sequence
//! file.
//!
//! Edge list grammar: the first data line is `n m`, followed by `m` lines
//! `u v` with 0-based vertex ids. Anything after `#` on a line is a comment.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::sequence::ContractionSequence;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: vertex {v} out of range (n = {n})")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: self-loop at {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("expected {expected} edges, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error("invalid graph6: {0}")]
    Graph6(String),
    #[error("invalid sequence file: {0}")]
    Sequence(String),
}

/// Parses the edge-list format, reporting the offending line on errors.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(ParseError::Syntax {
                line: line_no,
                msg: format!("expected two integers, got {line:?}"),
            });
        }
        let a: usize = fields[0].parse().map_err(|_| ParseError::Syntax {
            line: line_no,
            msg: format!("not an integer: {:?}", fields[0]),
        })?;
        let b: usize = fields[1].parse().map_err(|_| ParseError::Syntax {
            line: line_no,
            msg: format!("not an integer: {:?}", fields[1]),
        })?;
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a >= n {
                    return Err(ParseError::VertexOutOfRange { line: line_no, v: a, n });
                }
                if b >= n {
                    return Err(ParseError::VertexOutOfRange { line: line_no, v: b, n });
                }
                if a == b {
                    return Err(ParseError::SelfLoop { line: line_no, v: a });
                }
                if !seen.insert((a.min(b), a.max(b))) {
                    return Err(ParseError::DuplicateEdge { line: line_no, u: a.min(b), v: a.max(b) });
                }
                edges.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or(ParseError::Syntax { line: 0, msg: "empty input".into() })?;
    if edges.len() != m {
        return Err(ParseError::WrongEdgeCount { expected: m, found: edges.len() });
    }
    Graph::from_edges(n, &edges).map_err(|e| ParseError::Syntax { line: 0, msg: e.to_string() })
}

/// Canonical edge-list emission: header then sorted edges.
pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Decodes one graph from a graph6 line (supports the `>>graph6<<` header
/// and sizes up to 2^18 - 1).
pub fn parse_graph6(line: &str) -> Result<Graph, ParseError> {
    let s = line.trim().strip_prefix(">>graph6<<").unwrap_or(line.trim());
    let bytes: Vec<u8> = s.bytes().collect();
    if bytes.is_empty() {
        return Err(ParseError::Graph6("empty line".into()));
    }
    let (n, pos): (usize, usize) = if bytes[0] == b'~' {
        if bytes.len() >= 4 && bytes[1] != b'~' {
            let v = ((bytes[1] as usize - 63) << 12)
                | ((bytes[2] as usize - 63) << 6)
                | (bytes[3] as usize - 63);
            (v, 4)
        } else {
            return Err(ParseError::Graph6("sizes beyond 2^18 are not supported".into()));
        }
    } else {
        let v = bytes[0] as usize;
        if !(63..=125).contains(&v) {
            return Err(ParseError::Graph6(format!("bad size byte {v}")));
        }
        (v - 63, 1)
    };
    let bits_needed = n * n.saturating_sub(1) / 2;
    let data = &bytes[pos..];
    if data.len() * 6 < bits_needed {
        return Err(ParseError::Graph6(format!(
            "need {bits_needed} bits, got {}",
            data.len() * 6
        )));
    }
    let bit = |k: usize| -> Result<bool, ParseError> {
        let byte = data[k / 6];
        if !(63..=126).contains(&byte) {
            return Err(ParseError::Graph6(format!("bad data byte {byte}")));
        }
        Ok((byte - 63) >> (5 - k % 6) & 1 == 1)
    };
    let mut edges = Vec::new();
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            if bit(k)? {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges).map_err(|e| ParseError::Graph6(e.to_string()))
}

/// Encodes a graph as one graph6 line.
pub fn emit_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        assert!(n < 1 << 18, "graph6 emission supports n < 2^18");
        out.push(b'~');
        out.push(63 + ((n >> 12) & 63) as u8);
        out.push(63 + ((n >> 6) & 63) as u8);
        out.push(63 + (n & 63) as u8);
    }
    let mut acc = 0u8;
    let mut used = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            used += 1;
            if used == 6 {
                out.push(63 + acc);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        acc <<= 6 - used;
        out.push(63 + acc);
    }
    String::from_utf8(out).unwrap()
}

/// Parses a file of graph6 lines.
pub fn parse_graph6_file(text: &str) -> Result<Vec<Graph>, ParseError> {
    text.lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .map(parse_graph6)
        .collect()
}

/// On-disk sequence format. Serialization is canonical: fixed field order,
/// compact separators, so emit(parse(s)) == s for files this library writes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub version: u32,
    pub n: usize,
    pub width: usize,
    pub steps: Vec<(usize, usize)>,
}

impl From<&ContractionSequence> for SequenceFile {
    fn from(seq: &ContractionSequence) -> Self {
        SequenceFile { version: 1, n: seq.n0, width: seq.claimed_width, steps: seq.steps.clone() }
    }
}

impl SequenceFile {
    pub fn to_sequence(&self) -> ContractionSequence {
        ContractionSequence::new(self.n, self.steps.clone(), self.width)
    }
}

pub fn emit_sequence(seq: &ContractionSequence) -> String {
    serde_json::to_string(&SequenceFile::from(seq)).expect("sequence serializes")
}

pub fn parse_sequence(text: &str) -> Result<ContractionSequence, ParseError> {
    let file: SequenceFile =
        serde_json::from_str(text).map_err(|e| ParseError::Sequence(e.to_string()))?;
    if file.version != 1 {
        return Err(ParseError::Sequence(format!("unsupported version {}", file.version)));
    }
    Ok(file.to_sequence())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn edge_list_round_trip() {
        let g = gem();
        let text = emit_edge_list(&g);
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back, g);
        // canonical stability
        assert_eq!(emit_edge_list(&back), text);
    }

    #[test]
    fn edge_list_comments_and_errors() {
        let ok = parse_edge_list("# a path\n3 2\n0 1 # edge one\n1 2\n").unwrap();
        assert_eq!(ok, path(3));

        assert_eq!(
            parse_edge_list("3 2\n0 1\n0 1\n"),
            Err(ParseError::DuplicateEdge { line: 3, u: 0, v: 1 })
        );
        assert_eq!(
            parse_edge_list("3 1\n0 5\n"),
            Err(ParseError::VertexOutOfRange { line: 2, v: 5, n: 3 })
        );
        assert_eq!(
            parse_edge_list("3 1\n1 1\n"),
            Err(ParseError::SelfLoop { line: 2, v: 1 })
        );
        assert!(matches!(parse_edge_list("2 1\n"), Err(ParseError::WrongEdgeCount { .. })));
        assert!(matches!(parse_edge_list("x y\n"), Err(ParseError::Syntax { line: 1, .. })));
    }

    #[test]
    fn graph6_known_vector() {
        // 5 vertices, edges 0-2, 0-4, 1-3, 3-4 encodes as "DQc"
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(emit_graph6(&g), "DQc");
        assert_eq!(parse_graph6("DQc").unwrap(), g);
        assert_eq!(parse_graph6(">>graph6<<DQc").unwrap(), g);
    }

    #[test]
    fn graph6_round_trips() {
        for g in [path(4), cycle(5), complete(7), Graph::empty(1), Graph::empty(0), gem(), spider()] {
            let enc = emit_graph6(&g);
            assert_eq!(parse_graph6(&enc).unwrap(), g, "{enc}");
        }
        // a larger one crosses the multi-byte size boundary
        let g = path(80);
        assert_eq!(parse_graph6(&emit_graph6(&g)).unwrap(), g);
    }

    #[test]
    fn sequence_file_round_trip_is_byte_identical() {
        let seq = ContractionSequence::new(4, vec![(0, 1), (4, 2), (5, 3)], 1);
        let text = emit_sequence(&seq);
        assert_eq!(
            text,
            r#"{"version":1,"n":4,"width":1,"steps":[[0,1],[4,2],[5,3]]}"#
        );
        let back = parse_sequence(&text).unwrap();
        assert_eq!(back, seq);
        assert_eq!(emit_sequence(&back), text);
    }

    #[test]
    fn sequence_file_rejects_bad_version() {
        assert!(matches!(
            parse_sequence(r#"{"version":2,"n":1,"width":0,"steps":[]}"#),
            Err(ParseError::Sequence(_))
        ));
    }
}
