//! Edge-list text and `XPGR` binary formats.
//!
//! Text: a header line `n m [d]`, then `m` lines `u v` with `u < v`,
//! ASCII decimal, LF-terminated.
//!
//! Binary (all little-endian): magic `XPGR`, version `u32`, `n: u64`,
//! `m: u64`, `n + 1` CSR offsets as `u64`, then `2m` neighbor ids as `u32`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Graph, GraphError, NodeId, MAX_NODES};

pub const MAGIC: &[u8; 4] = b"XPGR";
pub const BINARY_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Binary,
}

impl GraphFormat {
    /// `.bin` and `.xpgr` are binary; anything else is the text format.
    pub fn from_path(path: &Path) -> GraphFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") | Some("xpgr") => GraphFormat::Binary,
            _ => GraphFormat::EdgeList,
        }
    }
}

pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<(), GraphError> {
    match graph.regular_degree() {
        Some(d) => writeln!(out, "{} {} {}", graph.n(), graph.edge_count(), d)?,
        None => writeln!(out, "{} {}", graph.n(), graph.edge_count())?,
    }
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph, GraphError> {
    let mut lines = input.lines().enumerate();
    let parse_err = |line: usize, msg: &str| GraphError::Parse { line: line + 1, msg: msg.to_string() };

    let (hline, header) = lines.next().ok_or_else(|| parse_err(0, "missing header"))?;
    let header = header?;
    let fields: Vec<&str> = header.split_ascii_whitespace().collect();
    if !(2..=3).contains(&fields.len()) {
        return Err(parse_err(hline, "header must be `n m [d]`"));
    }
    let num = |s: &str, line: usize| s.parse::<usize>().map_err(|_| parse_err(line, &format!("bad integer `{s}`")));
    let n = num(fields[0], hline)?;
    let m = num(fields[1], hline)?;
    let d = fields.get(2).map(|s| num(s, hline)).transpose()?;
    if n > MAX_NODES {
        return Err(GraphError::TooLarge(n));
    }

    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_ascii_whitespace();
        let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(i, "edge line must be `u v`"));
        };
        edges.push((num(u, i)?, num(v, i)?));
    }
    if edges.len() != m {
        return Err(parse_err(hline, &format!("header declares {m} edges, found {}", edges.len())));
    }
    let g = Graph::from_edges(n, edges)?;
    match d {
        Some(d) => g.with_regular_degree(d),
        None => Ok(g),
    }
}

pub fn write_binary<W: Write>(graph: &Graph, mut out: W) -> Result<(), GraphError> {
    out.write_all(MAGIC)?;
    out.write_all(&BINARY_VERSION.to_le_bytes())?;
    out.write_all(&(graph.n() as u64).to_le_bytes())?;
    out.write_all(&(graph.edge_count() as u64).to_le_bytes())?;
    for &o in graph.offsets() {
        out.write_all(&(o as u64).to_le_bytes())?;
    }
    for v in graph.targets() {
        out.write_all(&v.0.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<Graph, GraphError> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(GraphError::Format("bad magic".into()));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    input.read_exact(&mut b4)?;
    let version = u32::from_le_bytes(b4);
    if version != BINARY_VERSION {
        return Err(GraphError::Format(format!("unsupported version {version}")));
    }
    input.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    input.read_exact(&mut b8)?;
    let m = u64::from_le_bytes(b8) as usize;
    if n > MAX_NODES {
        return Err(GraphError::TooLarge(n));
    }
    if m > n.saturating_mul(n.saturating_sub(1)) / 2 {
        return Err(GraphError::Format(format!("{m} edges impossible on {n} nodes")));
    }
    let mut offsets = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        input.read_exact(&mut b8)?;
        offsets.push(u64::from_le_bytes(b8) as usize);
    }
    if offsets[n] != 2 * m {
        return Err(GraphError::Format("offset table does not end at 2m".into()));
    }
    let mut targets = Vec::with_capacity(2 * m);
    for _ in 0..2 * m {
        input.read_exact(&mut b4)?;
        let v = u32::from_le_bytes(b4);
        if v as usize >= n {
            return Err(GraphError::NodeOutOfRange { node: v as usize, n });
        }
        targets.push(NodeId(v));
    }
    Graph::from_csr(offsets, targets)
}

pub fn read_graph(path: &Path) -> Result<Graph, GraphError> {
    let file = File::open(path)?;
    match GraphFormat::from_path(path) {
        GraphFormat::Binary => read_binary(BufReader::new(file)),
        GraphFormat::EdgeList => read_edge_list(BufReader::new(file)),
    }
}

pub fn write_graph(path: &Path, graph: &Graph, format: GraphFormat) -> Result<(), GraphError> {
    let file = BufWriter::new(File::create(path)?);
    match format {
        GraphFormat::Binary => write_binary(graph, file),
        GraphFormat::EdgeList => write_edge_list(graph, file),
    }
}
