//! Capacitated graphs with distinguished source and sink, plus the seeded
//! generators used by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub capacity: f64,
}

/// A graph on vertices `0..vertex_count`. Undirected edges count when cut in
/// either direction; directed edges count from the source side outwards.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    vertex_count: usize,
    directed: bool,
    edges: Vec<Edge>,
    source: Option<usize>,
    sink: Option<usize>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize, directed: bool) -> Self {
        Self {
            vertex_count,
            directed,
            edges: Vec::new(),
            source: None,
            sink: None,
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, capacity: f64) -> Result<()> {
        if u >= self.vertex_count || v >= self.vertex_count {
            return Err(Error::InvalidInput(format!(
                "edge ({u}, {v}) outside vertex range 0..{}",
                self.vertex_count
            )));
        }
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        if !capacity.is_finite() || capacity < 0.0 {
            return Err(Error::InvalidInput(format!(
                "capacity {capacity} on edge ({u}, {v}) must be finite and nonnegative"
            )));
        }
        self.edges.push(Edge { u, v, capacity });
        Ok(())
    }

    pub fn set_terminals(&mut self, source: usize, sink: usize) -> Result<()> {
        if source >= self.vertex_count || sink >= self.vertex_count {
            return Err(Error::InvalidInput("terminal outside vertex range".into()));
        }
        if source == sink {
            return Err(Error::InvalidInput("source and sink coincide".into()));
        }
        self.source = Some(source);
        self.sink = Some(sink);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn source(&self) -> Option<usize> {
        self.source
    }

    pub fn sink(&self) -> Option<usize> {
        self.sink
    }

    pub fn has_integer_capacities(&self) -> bool {
        self.edges.iter().all(|e| e.capacity.fract() == 0.0)
    }

    /// Total capacity of edges leaving the vertex set marked in `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|e| {
                if self.directed {
                    side[e.u] && !side[e.v]
                } else {
                    side[e.u] != side[e.v]
                }
            })
            .map(|e| e.capacity)
            .sum()
    }

    /// Every capacity multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.capacity *= factor;
        }
        g
    }

    /// DIMACS max-flow text with 1-based vertex ids. Undirected edges are
    /// written as `e` lines.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p max {} {}\n", self.vertex_count, self.edges.len());
        if let Some(s) = self.source {
            out.push_str(&format!("n {} s\n", s + 1));
        }
        if let Some(t) = self.sink {
            out.push_str(&format!("n {} t\n", t + 1));
        }
        let tag = if self.directed { 'a' } else { 'e' };
        for e in &self.edges {
            out.push_str(&format!("{tag} {} {} {}\n", e.u + 1, e.v + 1, e.capacity));
        }
        out
    }
}

/// Seeded Erdős–Rényi graph `G(n, p)` with integer capacities uniform in
/// `1..=max_capacity` and distinct random terminals.
pub fn random_cut_instance(n: usize, p: f64, max_capacity: u32, seed: u64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("edge probability {p} outside [0, 1]")));
    }
    if n < 2 {
        return Err(Error::InvalidInput("need at least two vertices".into()));
    }
    if max_capacity == 0 {
        return Err(Error::InvalidInput("max_capacity must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = rng.gen_range(0..n);
    let mut t = rng.gen_range(0..n - 1);
    if t >= s {
        t += 1;
    }
    let mut g = WeightedGraph::new(n, false);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                let c = rng.gen_range(1..=max_capacity);
                g.add_edge(u, v, f64::from(c))?;
            }
        }
    }
    g.set_terminals(s, t)?;
    Ok(g)
}

/// Path `s — v1 — … — vn — t` (vertex ids `0, 1, .., n, n+1`). Edge `k` has
/// capacity `scale · (2 + (5k + 3) mod 7)`, except the middle edge, which has
/// capacity `scale` and is therefore the unique minimum cut.
pub fn path_instance(n: usize, scale: u64) -> Result<WeightedGraph> {
    if n < 2 || scale == 0 {
        return Err(Error::InvalidInput(
            "path instance needs n ≥ 2 and scale ≥ 1".into(),
        ));
    }
    let mut g = WeightedGraph::new(n + 2, false);
    let mid = (n + 1) / 2;
    for k in 0..=n {
        let base = if k == mid { 1 } else { 2 + (5 * k as u64 + 3) % 7 };
        g.add_edge(k, k + 1, (base * scale) as f64)?;
    }
    g.set_terminals(0, n + 1)?;
    Ok(g)
}
