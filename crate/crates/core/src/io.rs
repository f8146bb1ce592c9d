//! Plain-text formats for graphs and real vectors.
//!
//! Graph files start with `# girthlab-graph n=<n> m=<m> d=<degree|*>` and list
//! one edge `u v` (with `u < v`) per line. Vector files start with
//! `# girthlab-vector n=<n>` and list `index value` lines. Values are written
//! in the shortest form that parses back to the same `f64`.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::graph::{Graph, GraphError};

const GRAPH_MAGIC: &str = "girthlab-graph";
const VECTOR_MAGIC: &str = "girthlab-vector";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// A graph read from disk together with its free-form comment lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    /// Comment lines after the header, without the leading `# `.
    pub comments: Vec<String>,
}

pub fn graph_to_string(g: &Graph, comments: &[String]) -> String {
    let mut s = String::with_capacity(16 * g.edge_count() + 64);
    let d = g
        .declared_degree()
        .map_or_else(|| "*".to_string(), |k| k.to_string());
    let _ = writeln!(
        s,
        "# {GRAPH_MAGIC} n={} m={} d={d}",
        g.vertex_count(),
        g.edge_count()
    );
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn write_graph<W: Write>(g: &Graph, comments: &[String], mut out: W) -> io::Result<()> {
    out.write_all(graph_to_string(g, comments).as_bytes())
}

fn header_fields<'a>(line: &'a str, magic: &str) -> Option<Vec<(&'a str, &'a str)>> {
    let rest = line.strip_prefix("# ")?.strip_prefix(magic)?;
    let rest = rest.strip_prefix(' ')?;
    rest.split(' ')
        .map(|kv| kv.split_once('='))
        .collect::<Option<Vec<_>>>()
}

pub fn read_graph<R: BufRead>(input: R) -> Result<GraphFile> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.ok_or_else(|| parse_err(1, "empty file"))?;
    let fields = header_fields(&header, GRAPH_MAGIC)
        .filter(|f| f.len() == 3 && f[0].0 == "n" && f[1].0 == "m" && f[2].0 == "d")
        .ok_or_else(|| parse_err(1, format!("malformed header {header:?}")))?;
    let number = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| parse_err(1, format!("bad {what} in header: {s:?}")))
    };
    let n = number(fields[0].1, "n")?;
    let m = number(fields[1].1, "m")?;
    let degree = match fields[2].1 {
        "*" => None,
        s => Some(number(s, "d")?),
    };
    let mut comments = Vec::new();
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            continue;
        }
        let mut it = line.split(' ');
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(lineno, format!("expected `u v`, got {line:?}")));
        };
        let (Ok(u), Ok(v)) = (a.parse::<usize>(), b.parse::<usize>()) else {
            return Err(parse_err(lineno, format!("expected `u v`, got {line:?}")));
        };
        if u >= v {
            return Err(parse_err(lineno, format!("edge {u} {v} is not written with u < v")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(1, format!("header declares m={m} but {} edges follow", edges.len())));
    }
    let graph = Graph::from_edges(n, &edges)?;
    if graph.declared_degree() != degree {
        return Err(parse_err(1, format!("header degree does not match the edges ({:?})", graph.declared_degree())));
    }
    Ok(GraphFile { graph, comments })
}

pub fn vector_to_string(v: &[f64]) -> String {
    let mut s = String::with_capacity(24 * v.len() + 32);
    let _ = writeln!(s, "# {VECTOR_MAGIC} n={}", v.len());
    for (i, x) in v.iter().enumerate() {
        let _ = writeln!(s, "{i} {x:?}");
    }
    s
}

pub fn write_vector<W: Write>(v: &[f64], mut out: W) -> io::Result<()> {
    out.write_all(vector_to_string(v).as_bytes())
}

pub fn read_vector<R: BufRead>(input: R) -> Result<Vec<f64>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.ok_or_else(|| parse_err(1, "empty file"))?;
    let n = header_fields(&header, VECTOR_MAGIC)
        .filter(|f| f.len() == 1 && f[0].0 == "n")
        .and_then(|f| f[0].1.parse::<usize>().ok())
        .ok_or_else(|| parse_err(1, format!("malformed header {header:?}")))?;
    let mut out = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if line.starts_with('#') {
            continue;
        }
        let parsed = line
            .split_once(' ')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<f64>().ok()?)));
        match parsed {
            Some((idx, x)) if idx == out.len() => out.push(x),
            Some((idx, _)) => return Err(parse_err(lineno, format!("expected index {}, got {idx}", out.len()))),
            None => return Err(parse_err(lineno, format!("expected `index value`, got {line:?}"))),
        }
    }
    if out.len() != n {
        return Err(parse_err(1, format!("header declares n={n} but {} entries follow", out.len())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let text = graph_to_string(&g, &["hello".to_string()]);
        assert!(text.starts_with("# girthlab-graph n=4 m=4 d=2\n# hello\n0 1\n"));
        let back = read_graph(text.as_bytes()).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.comments, vec!["hello"]);
    }

    #[test]
    fn rejects_bad_headers() {
        for text in [
            "",
            "girthlab-graph n=2 m=1 d=1\n0 1\n",
            "# girthlab-graph n=2 m=1\n0 1\n",
            "# girthlab-graph n=2 m=1 d=2\n0 1\n",
            "# girthlab-graph n=2 m=2 d=1\n0 1\n",
            "# girthlab-graph n=2 m=1 d=1\n1 0\n",
        ] {
            assert!(read_graph(text.as_bytes()).is_err(), "{text:?}");
        }
    }

    #[test]
    fn vector_round_trip_is_exact() {
        let v = vec![0.1, -0.0, 1e-300, 1.0 / 3.0, f64::MAX, -2.5e-7];
        let back = read_vector(vector_to_string(&v).as_bytes()).unwrap();
        assert_eq!(v.len(), back.len());
        for (a, b) in v.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert!(read_vector("# girthlab-vector n=2\n0 1\n".as_bytes()).is_err());
        assert!(read_vector("# girthlab-vector n=1\n1 1\n".as_bytes()).is_err());
    }
}
