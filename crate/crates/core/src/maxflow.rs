//! Edmonds–Karp maximum flow, used as an independent check on cut minima.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Maximum s-t flow value of `graph`.
pub fn max_flow(graph: &WeightedGraph) -> Result<f64> {
    let (s, t) = match (graph.source(), graph.sink()) {
        (Some(s), Some(t)) => (s, t),
        _ => return Err(Error::InvalidInput("max flow needs source and sink".into())),
    };
    let n = graph.vertex_count();
    let mut residual = vec![vec![0.0f64; n]; n];
    for e in graph.edges() {
        residual[e.u][e.v] += e.capacity;
        if !graph.is_directed() {
            residual[e.v][e.u] += e.capacity;
        }
    }
    let mut flow = 0.0;
    let mut parent = vec![usize::MAX; n];
    loop {
        parent.fill(usize::MAX);
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for v in 0..n {
                if parent[v] == usize::MAX && residual[u][v] > 0.0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            return Ok(flow);
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = t;
        while v != s {
            let u = parent[v];
            bottleneck = bottleneck.min(residual[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            residual[u][v] -= bottleneck;
            residual[v][u] += bottleneck;
            v = u;
        }
        flow += bottleneck;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        let mut g = WeightedGraph::new(6, true);
        for (u, v, c) in [
            (0, 1, 16.0),
            (0, 2, 13.0),
            (1, 2, 10.0),
            (2, 1, 4.0),
            (1, 3, 12.0),
            (3, 2, 9.0),
            (2, 4, 14.0),
            (4, 3, 7.0),
            (3, 5, 20.0),
            (4, 5, 4.0),
        ] {
            g.add_edge(u, v, c).unwrap();
        }
        g.set_terminals(0, 5).unwrap();
        assert_eq!(max_flow(&g).unwrap(), 23.0);
    }

    #[test]
    fn disconnected_terminals() {
        let mut g = WeightedGraph::new(4, false);
        g.add_edge(0, 1, 3.0).unwrap();
        g.add_edge(2, 3, 3.0).unwrap();
        g.set_terminals(0, 3).unwrap();
        assert_eq!(max_flow(&g).unwrap(), 0.0);
    }

    #[test]
    fn needs_terminals() {
        assert!(max_flow(&WeightedGraph::new(2, false)).is_err());
    }
}
