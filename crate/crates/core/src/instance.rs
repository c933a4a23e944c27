//! Instance files.
//!
//! Graphs use the DIMACS max-flow layout with 1-based vertex ids:
//!
//! ```text
//! c comment
//! p max <vertices> <edges>
//! n <id> s
//! n <id> t
//! a <u> <v> <capacity>     directed arc
//! e <u> <v> <capacity>     undirected edge
//! ```
//!
//! A file uses either `a` or `e` lines, not both. Other function families
//! share the same line syntax:
//!
//! ```text
//! p iwata <n>
//! p modular <n>      then  w <i> <weight>        (1-based i, missing = 0)
//! p concave <n>      then  g <k> <value> for k = 1..n, and optional w lines
//! p table <n>        then  v <bitmask> <value> for every subset
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::functions::{ConcaveCardinality, CutFunction, Iwata, Modular, TableFunction};
use crate::graph::WeightedGraph;
use crate::oracle::{SetFunction, SubmodularOracle};

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Graph(WeightedGraph),
    Iwata { n: usize },
    Modular { weights: Vec<f64> },
    Concave { g: Vec<f64>, weights: Vec<f64> },
    Table { n: usize, values: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cut,
    Iwata,
    Modular,
    Concave,
    Table,
    Path,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Cut => "cut",
            Family::Iwata => "iwata",
            Family::Modular => "modular",
            Family::Concave => "concave",
            Family::Table => "table",
            Family::Path => "path",
        })
    }
}

impl Instance {
    pub fn family(&self) -> Family {
        match self {
            Instance::Graph(_) => Family::Cut,
            Instance::Iwata { .. } => Family::Iwata,
            Instance::Modular { .. } => Family::Modular,
            Instance::Concave { .. } => Family::Concave,
            Instance::Table { .. } => Family::Table,
        }
    }

    pub fn oracle(&self) -> Result<SubmodularOracle<Box<dyn SetFunction>>> {
        let f: Box<dyn SetFunction> = match self {
            Instance::Graph(g) => Box::new(CutFunction::new(g.clone())?),
            Instance::Iwata { n } => Box::new(Iwata::new(*n)?),
            Instance::Modular { weights } => Box::new(Modular::new(weights.clone())?),
            Instance::Concave { g, weights } => {
                Box::new(ConcaveCardinality::new(g.clone(), weights.clone())?)
            }
            Instance::Table { n, values } => Box::new(TableFunction::new(*n, values.clone())?),
        };
        SubmodularOracle::new(f)
    }

    /// Display label of each ground element: the 1-based DIMACS vertex id for
    /// graphs, the 1-based element index otherwise.
    pub fn labels(&self) -> Result<Vec<usize>> {
        Ok(match self {
            Instance::Graph(g) => CutFunction::new(g.clone())?
                .ground_vertices()
                .iter()
                .map(|v| v + 1)
                .collect(),
            _ => (1..=self.oracle()?.n()).collect(),
        })
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Fields<'a> {
    line: usize,
    it: std::str::SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn next_str(&mut self, what: &str) -> Result<&'a str> {
        self.it
            .next()
            .ok_or_else(|| parse_err(self.line, format!("missing {what}")))
    }

    fn next_usize(&mut self, what: &str) -> Result<usize> {
        let s = self.next_str(what)?;
        s.parse()
            .map_err(|_| parse_err(self.line, format!("{what} `{s}` is not a nonnegative integer")))
    }

    fn next_f64(&mut self, what: &str) -> Result<f64> {
        let s = self.next_str(what)?;
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(parse_err(self.line, format!("{what} `{s}` is not a finite number"))),
        }
    }

    fn finish(mut self) -> Result<()> {
        match self.it.next() {
            Some(extra) => Err(parse_err(self.line, format!("unexpected token `{extra}`"))),
            None => Ok(()),
        }
    }
}

fn index_1based(line: usize, id: usize, n: usize, what: &str) -> Result<usize> {
    if id == 0 || id > n {
        return Err(parse_err(line, format!("{what} {id} outside 1..={n}")));
    }
    Ok(id - 1)
}

enum Builder {
    Graph {
        graph: WeightedGraph,
        declared_edges: usize,
        source: Option<usize>,
        sink: Option<usize>,
        edge_kind: Option<char>,
        arcs: Vec<(usize, usize, f64, usize)>,
    },
    Iwata(usize),
    Modular(Vec<f64>),
    Concave {
        g: Vec<Option<f64>>,
        weights: Vec<f64>,
    },
    Table(usize, Vec<Option<f64>>),
}

/// Parses an instance file. Errors carry 1-based line numbers.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut builder: Option<Builder> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut f = Fields {
            line,
            it: trimmed.split_whitespace(),
        };
        let tag = f.next_str("line tag")?;
        if tag == "p" {
            if builder.is_some() {
                return Err(parse_err(line, "duplicate problem line"));
            }
            let kind = f.next_str("problem kind")?;
            builder = Some(match kind {
                "max" => {
                    let n = f.next_usize("vertex count")?;
                    let m = f.next_usize("edge count")?;
                    Builder::Graph {
                        graph: WeightedGraph::new(n, true),
                        declared_edges: m,
                        source: None,
                        sink: None,
                        edge_kind: None,
                        arcs: Vec::new(),
                    }
                }
                "iwata" => Builder::Iwata(f.next_usize("n")?),
                "modular" => Builder::Modular(vec![0.0; f.next_usize("n")?]),
                "concave" => {
                    let n = f.next_usize("n")?;
                    Builder::Concave {
                        g: vec![None; n],
                        weights: vec![0.0; n],
                    }
                }
                "table" => {
                    let n = f.next_usize("n")?;
                    if n > crate::functions::TABLE_LIMIT {
                        return Err(parse_err(line, format!("table size {n} too large")));
                    }
                    Builder::Table(n, vec![None; 1 << n])
                }
                other => return Err(parse_err(line, format!("unknown problem kind `{other}`"))),
            });
            f.finish()?;
            continue;
        }
        let b = builder
            .as_mut()
            .ok_or_else(|| parse_err(line, "data line before the problem line"))?;
        match (b, tag) {
            (Builder::Graph { graph, source, sink, .. }, "n") => {
                let id = f.next_usize("vertex id")?;
                let v = index_1based(line, id, graph.vertex_count(), "vertex")?;
                match f.next_str("terminal kind")? {
                    "s" => *source = Some(v),
                    "t" => *sink = Some(v),
                    other => return Err(parse_err(line, format!("terminal kind `{other}` is not s or t"))),
                }
            }
            (Builder::Graph { graph, edge_kind, arcs, .. }, kind @ ("a" | "e")) => {
                let k = kind.chars().next().unwrap_or('a');
                match edge_kind {
                    Some(prev) if *prev != k => {
                        return Err(parse_err(line, "mixing `a` and `e` lines"));
                    }
                    _ => *edge_kind = Some(k),
                }
                let n = graph.vertex_count();
                let u = index_1based(line, f.next_usize("tail")?, n, "vertex")?;
                let v = index_1based(line, f.next_usize("head")?, n, "vertex")?;
                let c = f.next_f64("capacity")?;
                if c < 0.0 {
                    return Err(parse_err(line, "negative capacity"));
                }
                if u == v {
                    return Err(parse_err(line, "self-loop"));
                }
                arcs.push((u, v, c, line));
            }
            (Builder::Modular(w), "w") | (Builder::Concave { weights: w, .. }, "w") => {
                let i = index_1based(line, f.next_usize("element")?, w.len(), "element")?;
                w[i] = f.next_f64("weight")?;
            }
            (Builder::Concave { g, .. }, "g") => {
                let k = index_1based(line, f.next_usize("cardinality")?, g.len(), "cardinality")?;
                g[k] = Some(f.next_f64("value")?);
            }
            (Builder::Table(n, values), "v") => {
                let bits = f.next_usize("bitmask")?;
                if bits >= 1 << *n {
                    return Err(parse_err(line, format!("bitmask {bits} too large")));
                }
                values[bits] = Some(f.next_f64("value")?);
            }
            (_, other) => return Err(parse_err(line, format!("unexpected line tag `{other}`"))),
        }
        f.finish()?;
    }

    let b = builder.ok_or_else(|| parse_err(last_line.max(1), "missing problem line"))?;
    let end = last_line.max(1);
    Ok(match b {
        Builder::Graph {
            graph,
            declared_edges,
            source,
            sink,
            edge_kind,
            arcs,
        } => {
            if arcs.len() != declared_edges {
                return Err(parse_err(
                    end,
                    format!("declared {declared_edges} edges, found {}", arcs.len()),
                ));
            }
            let mut g = WeightedGraph::new(graph.vertex_count(), edge_kind != Some('e'));
            for (u, v, c, line) in arcs {
                g.add_edge(u, v, c).map_err(|e| parse_err(line, e.to_string()))?;
            }
            let (s, t) = match (source, sink) {
                (Some(s), Some(t)) => (s, t),
                _ => return Err(parse_err(end, "missing source or sink line")),
            };
            g.set_terminals(s, t).map_err(|e| parse_err(end, e.to_string()))?;
            Instance::Graph(g)
        }
        Builder::Iwata(n) => Instance::Iwata { n },
        Builder::Modular(weights) => Instance::Modular { weights },
        Builder::Concave { g, weights } => {
            let mut table = vec![0.0];
            for (k, v) in g.into_iter().enumerate() {
                table.push(v.ok_or_else(|| parse_err(end, format!("missing g value for k = {}", k + 1)))?);
            }
            ConcaveCardinality::new(table.clone(), weights.clone())
                .map_err(|e| parse_err(end, e.to_string()))?;
            Instance::Concave { g: table, weights }
        }
        Builder::Table(n, values) => {
            let values = values
                .into_iter()
                .enumerate()
                .map(|(bits, v)| v.ok_or_else(|| parse_err(end, format!("missing value for bitmask {bits}"))))
                .collect::<Result<Vec<_>>>()?;
            Instance::Table { n, values }
        }
    })
}

/// Serializes an instance in the format [`parse_instance`] reads.
pub fn write_instance(instance: &Instance) -> String {
    match instance {
        Instance::Graph(g) => g.to_dimacs(),
        Instance::Iwata { n } => format!("p iwata {n}\n"),
        Instance::Modular { weights } => {
            let mut out = format!("p modular {}\n", weights.len());
            for (i, w) in weights.iter().enumerate() {
                out.push_str(&format!("w {} {w}\n", i + 1));
            }
            out
        }
        Instance::Concave { g, weights } => {
            let mut out = format!("p concave {}\n", weights.len());
            for (k, v) in g.iter().enumerate().skip(1) {
                out.push_str(&format!("g {k} {v}\n"));
            }
            for (i, w) in weights.iter().enumerate() {
                out.push_str(&format!("w {} {w}\n", i + 1));
            }
            out
        }
        Instance::Table { n, values } => {
            let mut out = format!("p table {n}\n");
            for (bits, v) in values.iter().enumerate() {
                out.push_str(&format!("v {bits} {v}\n"));
            }
            out
        }
    }
}
