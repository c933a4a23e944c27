//! Linear optimization over polytopes: the [`LinearOracle`] abstraction the
//! min-norm-point solver consumes, and its implementation for the base
//! polytope of a submodular function via the greedy algorithm.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_len, Error, Result};
use crate::linalg::{dot, norm_sq};
use crate::oracle::{SetFunction, SubmodularOracle};
use crate::parallel;

/// A polytope vertex. Base-polytope vertices remember the ordering that
/// produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub coords: Vec<f64>,
    pub order: Option<Vec<usize>>,
}

impl Vertex {
    pub fn new(coords: Vec<f64>) -> Self {
        Self {
            coords,
            order: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Linear optimization oracle: returns a vertex minimizing `direction · v`.
pub trait LinearOracle {
    fn dimension(&self) -> usize;

    fn minimize(&self, direction: &[f64]) -> Result<Vertex>;

    /// Upper bound `Q` on the Euclidean norm of every vertex.
    fn norm_bound(&self) -> f64;
}

/// Ascending order of `x`, ties broken by index.
pub fn ascending_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    order
}

/// Edmonds' greedy algorithm: the vertex of `B_f` minimizing `x · q`.
///
/// With `σ` the ascending order of `x`, sets
/// `q[σ(k)] = f({σ(0..=k)}) - f({σ(0..k)})`. Costs `n` oracle calls since
/// `f(∅) = 0` is known.
pub fn greedy_lo<F: SetFunction>(oracle: &SubmodularOracle<F>, x: &[f64]) -> Result<Vertex> {
    check_len(x, oracle.n())?;
    check_finite(x)?;
    let order = ascending_order(x);
    let chain = oracle.eval_chain(&order);
    let mut q = vec![0.0; x.len()];
    let mut prev = 0.0;
    for (&i, &v) in order.iter().zip(&chain) {
        q[i] = v - prev;
        prev = v;
    }
    Ok(Vertex {
        coords: q,
        order: Some(order),
    })
}

/// The base polytope `B_f` seen through its greedy linear oracle.
pub struct BasePolytope<'a, F> {
    oracle: &'a SubmodularOracle<F>,
}

impl<'a, F: SetFunction> BasePolytope<'a, F> {
    pub fn new(oracle: &'a SubmodularOracle<F>) -> Self {
        Self { oracle }
    }

    pub fn oracle(&self) -> &'a SubmodularOracle<F> {
        self.oracle
    }
}

impl<F: SetFunction> LinearOracle for BasePolytope<'_, F> {
    fn dimension(&self) -> usize {
        self.oracle.n()
    }

    fn minimize(&self, direction: &[f64]) -> Result<Vertex> {
        greedy_lo(self.oracle, direction)
    }

    /// `√n · F`, from `|q_i| ≤ F` on every greedy vertex.
    fn norm_bound(&self) -> f64 {
        (self.oracle.n() as f64).sqrt() * self.oracle.compute_f()
    }
}

/// The convex hull of an explicit vertex list. Linear optimization scans the
/// list; ties go to the earliest vertex.
#[derive(Debug, Clone)]
pub struct FinitePolytope {
    vertices: Vec<Vec<f64>>,
    dim: usize,
}

impl FinitePolytope {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match vertices.first() {
            Some(v) => v.len(),
            None => return Err(Error::InvalidInput("polytope needs a vertex".into())),
        };
        for v in &vertices {
            check_len(v, dim)?;
            check_finite(v)?;
        }
        Ok(Self { vertices, dim })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }
}

impl LinearOracle for FinitePolytope {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn minimize(&self, direction: &[f64]) -> Result<Vertex> {
        check_len(direction, self.dim)?;
        check_finite(direction)?;
        let mut best = 0;
        let mut best_val = f64::INFINITY;
        for (i, v) in self.vertices.iter().enumerate() {
            let val = dot(direction, v);
            if val < best_val {
                best_val = val;
                best = i;
            }
        }
        Ok(Vertex::new(self.vertices[best].clone()))
    }

    fn norm_bound(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| norm_sq(v))
            .fold(0.0, f64::max)
            .sqrt()
    }
}

/// Largest ground set [`verify_membership`] will enumerate.
pub const MEMBERSHIP_LIMIT: usize = 25;

/// Checks `x ∈ B_f` by enumerating every subset: `x(A) ≤ f(A) + tol` for all
/// `A` and `|x([n]) - f([n])| ≤ tol`.
pub fn verify_membership<F: SetFunction>(
    oracle: &SubmodularOracle<F>,
    x: &[f64],
    tol: f64,
) -> Result<bool> {
    let n = oracle.n();
    if n > MEMBERSHIP_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: MEMBERSHIP_LIMIT,
        });
    }
    check_len(x, n)?;
    check_finite(x)?;
    let full = oracle.eval(&vec![true; n]);
    if (x.iter().sum::<f64>() - full).abs() > tol {
        return Ok(false);
    }
    let total = 1u64 << n;
    let ok = parallel::map(parallel::shards(total), |range| {
        let mut mask = vec![false; n];
        range.into_iter().all(|bits| {
            let mut sum = 0.0;
            for (i, m) in mask.iter_mut().enumerate() {
                *m = bits >> i & 1 == 1;
                if *m {
                    sum += x[i];
                }
            }
            sum <= oracle.eval(&mask) + tol
        })
    });
    Ok(ok.into_iter().all(|b| b))
}
