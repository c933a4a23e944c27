//! Submodular function minimization by the Fujishige–Wolfe method: run the
//! min-norm-point solver on the base polytope, read a set off the sorted
//! iterate, and certify it with Edmonds' lower bound.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_len, Result};
use crate::oracle::{SetFunction, SubmodularOracle};
use crate::polytope::{ascending_order, BasePolytope};
use crate::wolfe::{self, IterationRecord, Termination, WolfeOptions};

#[derive(Debug, Clone)]
pub struct SfmOptions {
    /// `None` picks [`default_epsilon`].
    pub epsilon: Option<f64>,
    pub max_iterations: usize,
    /// Also try every prefix of the sorted iterate.
    pub prefix_sweep: bool,
    /// Keep the per-iteration trace in the result.
    pub keep_trace: bool,
}

impl Default for SfmOptions {
    fn default() -> Self {
        Self {
            epsilon: None,
            max_iterations: 1_000_000,
            prefix_sweep: true,
            keep_trace: true,
        }
    }
}

impl SfmOptions {
    pub fn epsilon(mut self, eps: f64) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = cap;
        self
    }

    pub fn prefix_sweep(mut self, yes: bool) -> Self {
        self.prefix_sweep = yes;
        self
    }

    pub fn keep_trace(mut self, yes: bool) -> Self {
        self.keep_trace = yes;
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SfmResult {
    /// Sorted ground-set indices of the returned set.
    pub min_set: Vec<usize>,
    /// Normalized oracle value of `min_set`.
    pub min_value: f64,
    /// Edmonds bound `Σ_{x_i<0} x_i` at the final iterate.
    pub lower_bound: f64,
    pub gap: f64,
    pub x_final: Vec<f64>,
    pub epsilon_used: f64,
    pub eo_calls: u64,
    pub iterations: usize,
    pub major_cycles: usize,
    pub minor_cycles: usize,
    pub termination: Termination,
    /// `Δ(x) = ‖x‖² - min_q x·q` at the final iterate.
    pub delta_certificate: f64,
    /// Raw `f(∅)` that was subtracted from every value.
    pub offset: f64,
    #[serde(skip)]
    pub trace: Vec<IterationRecord>,
}

impl SfmResult {
    /// For integer-valued functions a gap below one proves `min_set` optimal.
    pub fn is_certified_exact(&self) -> bool {
        self.gap < 1.0 - 1e-9
    }

    /// The value before `f(∅)` normalization.
    pub fn raw_min_value(&self) -> f64 {
        self.min_value + self.offset
    }
}

/// `1/(4n)` for integer-valued functions; `1e-6·√n·F` otherwise.
pub fn default_epsilon<F: SetFunction>(oracle: &SubmodularOracle<F>) -> f64 {
    let n = oracle.n() as f64;
    if oracle.is_integer_valued() {
        1.0 / (4.0 * n)
    } else {
        1e-6 * n.sqrt() * oracle.compute_f()
    }
}

/// Edmonds' lower bound `Σ_{i: x_i < 0} x_i`, valid for `x ∈ B_f`.
pub fn edmonds_lower_bound(x: &[f64]) -> f64 {
    // Adding 0.0 turns the empty sum's -0.0 into 0.0.
    x.iter().filter(|&&v| v < 0.0).sum::<f64>() + 0.0
}

/// Robust rounding of an approximate min-norm point.
///
/// Sorts `x` ascending (ties by index) and returns the first `k` sorted
/// elements, `k` the smallest index with `x_(k+1) ≥ 0` and
/// `x_(k+1) - x_(k) ≥ ε/n` (the gap condition is vacuous at `k = 0`). If no
/// `k < n` qualifies the whole ground set is returned. Output is sorted.
pub fn robust_round(x: &[f64], epsilon: f64) -> Vec<usize> {
    let n = x.len();
    let order = ascending_order(x);
    let threshold = epsilon / n as f64;
    let k = (0..n)
        .find(|&k| {
            let next = x[order[k]];
            next >= 0.0 && (k == 0 || next - x[order[k - 1]] >= threshold)
        })
        .unwrap_or(n);
    let mut set = order[..k].to_vec();
    set.sort_unstable();
    set
}

/// Best set among all prefixes of the ascending order of `x` (including the
/// empty set and the robust-rounding set, which is itself a prefix). Ties
/// keep the robust-rounding set, then the shortest prefix. Costs `n`
/// evaluations.
pub fn prefix_sweep<F: SetFunction>(
    x: &[f64],
    epsilon: f64,
    oracle: &SubmodularOracle<F>,
) -> Result<(Vec<usize>, f64)> {
    check_len(x, oracle.n())?;
    check_finite(x)?;
    let order = ascending_order(x);
    let robust = robust_round(x, epsilon);
    let k_robust = robust.len();
    let mut values = Vec::with_capacity(order.len() + 1);
    values.push(0.0);
    values.extend(oracle.eval_chain(&order));
    let mut best = k_robust;
    for (k, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = k;
        }
    }
    let mut set = order[..best].to_vec();
    set.sort_unstable();
    Ok((set, values[best]))
}

/// `Σ_{i<n} (x_(i+1) - x_(i)) · (f([i]) - x([i]))` over the ascending order;
/// equals `‖x‖² - x·q` for the greedy vertex `q` at `x`. Costs `n`
/// evaluations.
pub fn telescoping_sum<F: SetFunction>(x: &[f64], oracle: &SubmodularOracle<F>) -> Result<f64> {
    check_len(x, oracle.n())?;
    check_finite(x)?;
    let order = ascending_order(x);
    let chain = oracle.eval_chain(&order);
    let mut prefix = 0.0;
    let mut total = 0.0;
    for i in 0..order.len().saturating_sub(1) {
        prefix += x[order[i]];
        total += (x[order[i + 1]] - x[order[i]]) * (chain[i] - prefix);
    }
    Ok(total)
}

/// Minimizes `f` over all subsets of the ground set.
///
/// Integer-valued functions at the default tolerance get an exact minimizer;
/// in general `min_value ≤ min f + 2nε`. An iteration cap or stall still
/// yields a result carrying its (weaker) certified gap.
pub fn minimize<F: SetFunction>(
    oracle: &SubmodularOracle<F>,
    opts: &SfmOptions,
) -> Result<SfmResult> {
    let eo_start = oracle.eo_count();
    let epsilon = opts.epsilon.unwrap_or_else(|| default_epsilon(oracle));
    let polytope = BasePolytope::new(oracle);
    let wolfe_opts = WolfeOptions::new(epsilon).max_iterations(opts.max_iterations);
    let run = wolfe::run(&polytope, &wolfe_opts)?;
    let x = run.x;

    let min_set = if opts.prefix_sweep {
        prefix_sweep(&x, epsilon, oracle)?.0
    } else {
        robust_round(&x, epsilon)
    };
    let min_value = oracle.eval_indices(&min_set);
    let lower_bound = edmonds_lower_bound(&x);
    Ok(SfmResult {
        min_set,
        min_value,
        lower_bound,
        gap: min_value - lower_bound,
        epsilon_used: epsilon,
        eo_calls: oracle.eo_count() - eo_start,
        iterations: run.major_cycles + run.minor_cycles,
        major_cycles: run.major_cycles,
        minor_cycles: run.minor_cycles,
        termination: run.termination,
        delta_certificate: run.delta_certificate,
        offset: oracle.offset(),
        trace: if opts.keep_trace { run.iterations } else { Vec::new() },
        x_final: x,
    })
}
