//! Plain-text edge list: `n m` header, then `m` lines `u v` with `u < v`.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_pair(text: &str, line: usize) -> Result<(usize, usize), FormatError> {
    if text.contains('\r') {
        return Err(syntax(line, "CR line ending"));
    }
    let mut it = text.split(' ');
    let mut next = || -> Result<usize, FormatError> {
        let tok = it
            .next()
            .ok_or_else(|| syntax(line, "expected two integers"))?;
        tok.parse()
            .map_err(|_| syntax(line, format!("bad integer {tok:?}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(syntax(line, "trailing tokens"));
    }
    Ok((a, b))
}

pub fn read_graph<R: BufRead>(reader: R) -> Result<Graph, FormatError> {
    // `BufRead::lines` would silently drop a CR before each LF.
    let mut lines = reader.split(b'\n').map(|line| {
        line.and_then(|bytes| {
            String::from_utf8(bytes).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
        })
    });
    let header = lines.next().ok_or_else(|| syntax(1, "missing header"))??;
    let (n, m) = parse_pair(&header, 1)?;
    let mut edges = Vec::with_capacity(m);
    let mut prev: Option<(usize, usize)> = None;
    for i in 0..m {
        let lineno = i + 2;
        let text = lines
            .next()
            .ok_or_else(|| syntax(lineno, format!("expected {m} edges, found {i}")))??;
        let (u, v) = parse_pair(&text, lineno)?;
        if u >= v {
            return Err(syntax(lineno, format!("edge {u} {v} must satisfy u < v")));
        }
        if v >= n {
            return Err(FormatError::Graph {
                line: lineno,
                source: GraphError::VertexOutOfRange { vertex: v, n },
            });
        }
        if prev == Some((u, v)) {
            return Err(FormatError::Graph {
                line: lineno,
                source: GraphError::DuplicateEdge(u, v),
            });
        }
        prev = Some((u, v));
        edges.push((u, v));
    }
    if let Some(extra) = lines.next() {
        let extra = extra?;
        return Err(syntax(m + 2, format!("unexpected content {extra:?}")));
    }
    Graph::from_edges(n, edges).map_err(|source| FormatError::Graph { line: 0, source })
}

/// Writes canonical (sorted, `u < v`) edges with LF endings.
pub fn write_graph<W: Write>(g: &Graph, mut w: W) -> io::Result<()> {
    writeln!(w, "{} {}", g.n(), g.num_edges())?;
    for &(u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}
