//! Graph file formats.
//!
//! The canonical text format is an edge list: a header line `n m` followed
//! by `m` lines `u v` with `0 <= u < v < n`, LF-terminated. The reader also
//! accepts graph6 (detected by a leading byte >= 63 and the absence of
//! spaces on the first line); the writer emits edge lists.

use std::path::Path;

use crate::graph::Graph;
use crate::{Error, Result};

/// Reads a graph from a string, auto-detecting the format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let trimmed = text.trim_start();
    let first_line = trimmed.lines().next().unwrap_or("");
    let looks_graph6 = first_line.bytes().next().is_some_and(|b| b >= 63) && !first_line.contains(' ');
    if looks_graph6 {
        parse_graph6(first_line)
    } else {
        parse_edge_list(text)
    }
}

/// Reads a graph file, auto-detecting the format.
pub fn read_graph_file(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text)
}

/// Parses the canonical edge-list format. Malformed content is reported
/// with its 1-based line number. Blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let mut parts = header.split_whitespace();
    let n: usize = parse_field(parts.next(), header_no + 1, "vertex count")?;
    let m: usize = parse_field(parts.next(), header_no + 1, "edge count")?;
    if parts.next().is_some() {
        return Err(Error::Parse {
            line: header_no + 1,
            msg: "header must be exactly \"n m\"".into(),
        });
    }
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines.next().ok_or(Error::Parse {
            line: header_no + 1,
            msg: format!("expected {m} edge lines"),
        })?;
        let mut parts = line.split_whitespace();
        let u: u32 = parse_field(parts.next(), line_no + 1, "endpoint")?;
        let v: u32 = parse_field(parts.next(), line_no + 1, "endpoint")?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: line_no + 1,
                msg: "edge line must be exactly \"u v\"".into(),
            });
        }
        edges.push((u, v));
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse {
            line: line_no + 1,
            msg: "trailing content after edge list".into(),
        });
    }
    Graph::new(n, &edges)
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T> {
    field
        .ok_or(Error::Parse {
            line,
            msg: format!("missing {what}"),
        })?
        .parse()
        .map_err(|_| Error::Parse {
            line,
            msg: format!("invalid {what}"),
        })
}

/// Emits the canonical edge-list format.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses a graph6 line (standard 6-bit encoding of the upper triangle).
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let bytes = line.trim().as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "empty graph6 line".into(),
        });
    }
    let (n, rest) = if bytes[0] == b'~' {
        if bytes.len() >= 4 && bytes[1] != b'~' {
            let mut n = 0usize;
            for &b in &bytes[1..4] {
                n = n << 6 | decode6(b, 1)? as usize;
            }
            (n, &bytes[4..])
        } else {
            return Err(Error::Parse {
                line: 1,
                msg: "graph6 sizes above 2^18 are not supported".into(),
            });
        }
    } else {
        (decode6(bytes[0], 1)? as usize, &bytes[1..])
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let need = (pairs + 5) / 6;
    if rest.len() != need {
        return Err(Error::Parse {
            line: 1,
            msg: format!("graph6 body has {} bytes, expected {need}", rest.len()),
        });
    }
    let mut edges = Vec::new();
    let mut t = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let b = decode6(rest[t / 6], 1)?;
            if (b >> (5 - t % 6)) & 1 == 1 {
                edges.push((i as u32, j as u32));
            }
            t += 1;
            if t == pairs {
                break 'outer;
            }
        }
    }
    Graph::new(n, &edges)
}

fn decode6(b: u8, line: usize) -> Result<u8> {
    if (63..=126).contains(&b) {
        Ok(b - 63)
    } else {
        Err(Error::Parse {
            line,
            msg: format!("invalid graph6 byte {b:#x}"),
        })
    }
}

/// Encodes a graph as a graph6 line.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut filled = 0u8;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}
