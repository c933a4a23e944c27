//! Submodular function families used as fixtures and benchmarks.

use crate::error::{check_finite, Error, Result};
use crate::graph::WeightedGraph;
use crate::oracle::{SetFunction, SubmodularOracle};

/// `f(S) = Σ_{i∈S} w_i`.
#[derive(Debug, Clone)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_finite(&weights)?;
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &[bool]) -> f64 {
        set.iter()
            .zip(&self.weights)
            .filter(|(&b, _)| b)
            .map(|(_, w)| w)
            .sum()
    }

    fn chain_values(&self, order: &[usize]) -> Vec<f64> {
        let mut acc = 0.0;
        order
            .iter()
            .map(|&i| {
                acc += self.weights[i];
                acc
            })
            .collect()
    }

    fn is_integer_valued(&self) -> bool {
        self.weights.iter().all(|w| w.fract() == 0.0)
    }
}

pub fn modular_oracle(weights: Vec<f64>) -> Result<SubmodularOracle<Modular>> {
    SubmodularOracle::new(Modular::new(weights)?)
}

/// s-t cut function over the non-terminal vertices:
/// `f(S) = c(δ(S ∪ {s}))`. The oracle wrapper subtracts `c(δ({s}))`.
#[derive(Debug, Clone)]
pub struct CutFunction {
    graph: WeightedGraph,
    source: usize,
    /// Graph vertex of each ground element.
    ground: Vec<usize>,
    /// Ground index of each graph vertex, if any.
    position: Vec<Option<usize>>,
    /// `(neighbor, capacity, outgoing)`; undirected edges appear as outgoing
    /// from both ends.
    adjacency: Vec<Vec<(usize, f64, bool)>>,
}

impl CutFunction {
    pub fn new(graph: WeightedGraph) -> Result<Self> {
        let (source, sink) = match (graph.source(), graph.sink()) {
            (Some(s), Some(t)) => (s, t),
            _ => return Err(Error::InvalidInput("cut function needs source and sink".into())),
        };
        let ground: Vec<usize> = (0..graph.vertex_count())
            .filter(|&v| v != source && v != sink)
            .collect();
        if ground.is_empty() {
            return Err(Error::InvalidInput("graph has no non-terminal vertices".into()));
        }
        let mut position = vec![None; graph.vertex_count()];
        for (i, &v) in ground.iter().enumerate() {
            position[v] = Some(i);
        }
        let mut adjacency = vec![Vec::new(); graph.vertex_count()];
        for e in graph.edges() {
            if graph.is_directed() {
                adjacency[e.u].push((e.v, e.capacity, true));
                adjacency[e.v].push((e.u, e.capacity, false));
            } else {
                adjacency[e.u].push((e.v, e.capacity, true));
                adjacency[e.v].push((e.u, e.capacity, true));
            }
        }
        Ok(Self {
            graph,
            source,
            ground,
            position,
            adjacency,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    /// Graph vertex id of each ground element.
    pub fn ground_vertices(&self) -> &[usize] {
        &self.ground
    }

    pub fn ground_index(&self, vertex: usize) -> Option<usize> {
        self.position[vertex]
    }

    fn side(&self, set: &[bool]) -> Vec<bool> {
        let mut side = vec![false; self.graph.vertex_count()];
        side[self.source] = true;
        for (i, &v) in self.ground.iter().enumerate() {
            side[v] = set[i];
        }
        side
    }
}

impl SetFunction for CutFunction {
    fn ground_size(&self) -> usize {
        self.ground.len()
    }

    fn value(&self, set: &[bool]) -> f64 {
        self.graph.cut_capacity(&self.side(set))
    }

    fn chain_values(&self, order: &[usize]) -> Vec<f64> {
        let mut side = self.side(&vec![false; self.ground.len()]);
        let mut cut = self.graph.cut_capacity(&side);
        let directed = self.graph.is_directed();
        order
            .iter()
            .map(|&i| {
                let v = self.ground[i];
                for &(w, c, outgoing) in &self.adjacency[v] {
                    if directed {
                        match (outgoing, side[w]) {
                            (true, false) => cut += c,
                            (false, true) => cut -= c,
                            _ => {}
                        }
                    } else if side[w] {
                        cut -= c;
                    } else {
                        cut += c;
                    }
                }
                side[v] = true;
                cut
            })
            .collect()
    }

    fn is_integer_valued(&self) -> bool {
        self.graph.has_integer_capacities()
    }
}

/// Normalized s-t cut oracle. Add [`SubmodularOracle::offset`]
/// (`= c(δ({s}))`) to a normalized value to recover the cut capacity.
pub fn cut_oracle(graph: WeightedGraph) -> Result<SubmodularOracle<CutFunction>> {
    SubmodularOracle::new(CutFunction::new(graph)?)
}

/// Iwata's test function `f(S) = |S|·|V∖S| - Σ_{j∈S} (5j - 2n)` with
/// 1-based element labels `j`.
#[derive(Debug, Clone, Copy)]
pub struct Iwata {
    n: usize,
}

impl Iwata {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("Iwata function needs n ≥ 1".into()));
        }
        Ok(Self { n })
    }

    fn linear(&self, i: usize) -> f64 {
        (5 * (i + 1)) as f64 - (2 * self.n) as f64
    }
}

impl SetFunction for Iwata {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[bool]) -> f64 {
        let k = set.iter().filter(|&&b| b).count();
        let lin: f64 = (0..self.n).filter(|&i| set[i]).map(|i| self.linear(i)).sum();
        (k * (self.n - k)) as f64 - lin
    }

    fn chain_values(&self, order: &[usize]) -> Vec<f64> {
        let mut lin = 0.0;
        order
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                lin += self.linear(i);
                let k = k + 1;
                (k * (self.n - k)) as f64 - lin
            })
            .collect()
    }

    fn is_integer_valued(&self) -> bool {
        true
    }
}

pub fn iwata_oracle(n: usize) -> Result<SubmodularOracle<Iwata>> {
    SubmodularOracle::new(Iwata::new(n)?)
}

/// `f(S) = g(|S|) + Σ_{i∈S} w_i` with `g` concave and `g(0) = 0`.
#[derive(Debug, Clone)]
pub struct ConcaveCardinality {
    g: Vec<f64>,
    weights: Vec<f64>,
}

impl ConcaveCardinality {
    /// `g` holds `g(0), .., g(n)`.
    pub fn new(g: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        check_finite(&g)?;
        check_finite(&weights)?;
        if g.len() != weights.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "table has {} entries, expected {}",
                g.len(),
                weights.len() + 1
            )));
        }
        if g[0] != 0.0 {
            return Err(Error::InvalidInput("g(0) must be 0".into()));
        }
        let scale = g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for k in 1..g.len().saturating_sub(1) {
            let (left, right) = (g[k] - g[k - 1], g[k + 1] - g[k]);
            if right > left + 1e-12 * scale {
                return Err(Error::InvalidInput(format!(
                    "table is not concave at k = {k}: increment {right} after {left}"
                )));
            }
        }
        Ok(Self { g, weights })
    }
}

impl SetFunction for ConcaveCardinality {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &[bool]) -> f64 {
        let mut k = 0;
        let mut lin = 0.0;
        for (&b, w) in set.iter().zip(&self.weights) {
            if b {
                k += 1;
                lin += w;
            }
        }
        self.g[k] + lin
    }

    fn chain_values(&self, order: &[usize]) -> Vec<f64> {
        let mut lin = 0.0;
        order
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                lin += self.weights[i];
                self.g[k + 1] + lin
            })
            .collect()
    }

    fn is_integer_valued(&self) -> bool {
        self.g.iter().chain(&self.weights).all(|v| v.fract() == 0.0)
    }
}

pub fn concave_cardinality_oracle(
    g: Vec<f64>,
    weights: Vec<f64>,
) -> Result<SubmodularOracle<ConcaveCardinality>> {
    SubmodularOracle::new(ConcaveCardinality::new(g, weights)?)
}

/// Largest ground set a [`TableFunction`] may have.
pub const TABLE_LIMIT: usize = 22;

/// A set function given by its full value table, indexed by the bitmask
/// with bit `i` set for element `i`. Not necessarily submodular.
#[derive(Debug, Clone)]
pub struct TableFunction {
    n: usize,
    values: Vec<f64>,
}

impl TableFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > TABLE_LIMIT {
            return Err(Error::TooLarge { n, limit: TABLE_LIMIT });
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidInput(format!(
                "table for n = {n} needs {} values, got {}",
                1u64 << n,
                values.len()
            )));
        }
        check_finite(&values)?;
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(&[bool]) -> f64) -> Result<Self> {
        if n > TABLE_LIMIT {
            return Err(Error::TooLarge { n, limit: TABLE_LIMIT });
        }
        let mut mask = vec![false; n];
        let values = (0..1u64 << n)
            .map(|bits| {
                for (i, m) in mask.iter_mut().enumerate() {
                    *m = bits >> i & 1 == 1;
                }
                f(&mask)
            })
            .collect();
        Self::new(n, values)
    }
}

impl SetFunction for TableFunction {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[bool]) -> f64 {
        let bits = set
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | (usize::from(b) << i));
        self.values[bits]
    }

    fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.fract() == 0.0)
    }
}
