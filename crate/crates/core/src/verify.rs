//! Exhaustive ground truth for small instances.

use crate::error::{Error, Result};
use crate::functions::{ConcaveCardinality, Modular};
use crate::oracle::{indices_from_mask, FnSetFunction, SetFunction, SubmodularOracle};
use crate::parallel;

/// Largest ground set [`brute_min`] enumerates.
pub const BRUTE_LIMIT: usize = 22;
/// Largest ground set [`check_submodular`] enumerates.
pub const SUBMODULAR_CHECK_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub min_value: f64,
    /// Every minimizing set, as sorted index lists in enumeration order.
    pub minimizers: Vec<Vec<usize>>,
    pub evaluations: u64,
}

fn fill_mask(mask: &mut [bool], bits: u64) {
    for (i, m) in mask.iter_mut().enumerate() {
        *m = bits >> i & 1 == 1;
    }
}

/// Minimum over all `2^n` subsets, enumerated by plain binary counting
/// (bit `i` ↔ element `i`).
pub fn brute_min<F: SetFunction>(oracle: &SubmodularOracle<F>) -> Result<BruteForceResult> {
    let n = oracle.n();
    if n > BRUTE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_LIMIT,
        });
    }
    let partial = parallel::map(parallel::shards(1u64 << n), |range| {
        let mut mask = vec![false; n];
        let mut best = f64::INFINITY;
        let mut argmins = Vec::new();
        let count = range.end - range.start;
        for bits in range {
            fill_mask(&mut mask, bits);
            let v = oracle.eval(&mask);
            if v < best {
                best = v;
                argmins.clear();
            }
            if v == best {
                argmins.push(bits);
            }
        }
        (best, argmins, count)
    });
    let min_value = partial.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let mut minimizers = Vec::new();
    let mut evaluations = 0;
    let mut mask = vec![false; n];
    for (best, argmins, count) in partial {
        evaluations += count;
        if best == min_value {
            for bits in argmins {
                fill_mask(&mut mask, bits);
                minimizers.push(indices_from_mask(&mask));
            }
        }
    }
    Ok(BruteForceResult {
        min_value,
        minimizers,
        evaluations,
    })
}

/// A failed diminishing-returns inequality
/// `f(S ∪ i) - f(S) ≥ f(T ∪ i) - f(T)` with `S ⊆ T`, `i ∉ T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodularityViolation {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub i: usize,
    pub f_s: f64,
    pub f_s_i: f64,
    pub f_t: f64,
    pub f_t_i: f64,
}

/// Checks every `(S, T, i)` triple. Returns the first violation in the order
/// (T ascending, S ascending submask, i ascending), or `None`.
///
/// Values are compared with an absolute slack of `1e-9 · max(1, max|f|)`.
pub fn check_submodular<F: SetFunction>(
    oracle: &SubmodularOracle<F>,
) -> Result<Option<SubmodularityViolation>> {
    let n = oracle.n();
    if n > SUBMODULAR_CHECK_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: SUBMODULAR_CHECK_LIMIT,
        });
    }
    let total = 1u64 << n;
    let mut mask = vec![false; n];
    let table: Vec<f64> = (0..total)
        .map(|bits| {
            fill_mask(&mut mask, bits);
            oracle.eval(&mask)
        })
        .collect();
    let tol = 1e-9 * table.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let to_set = |bits: u64| (0..n).filter(|&i| bits >> i & 1 == 1).collect::<Vec<_>>();
    let found = parallel::map((0..total).collect(), |t| {
        let mut s = 0u64;
        loop {
            // `s` walks the submasks of `t` in ascending order.
            for i in 0..n {
                let bit = 1u64 << i;
                if t & bit != 0 {
                    continue;
                }
                let (f_s, f_s_i) = (table[s as usize], table[(s | bit) as usize]);
                let (f_t, f_t_i) = (table[t as usize], table[(t | bit) as usize]);
                if f_s_i - f_s < f_t_i - f_t - tol {
                    return Some((s, t, i, f_s, f_s_i, f_t, f_t_i));
                }
            }
            if s == t {
                return None;
            }
            s = s.wrapping_sub(t) & t;
        }
    });
    Ok(found
        .into_iter()
        .flatten()
        .next()
        .map(|(s, t, i, f_s, f_s_i, f_t, f_t_i)| SubmodularityViolation {
            s: to_set(s),
            t: to_set(t),
            i,
            f_s,
            f_s_i,
            f_t,
            f_t_i,
        }))
}

/// A fixture whose minimum-norm point is known in closed form.
pub struct KnownCase {
    pub name: &'static str,
    pub oracle: SubmodularOracle<Box<dyn SetFunction>>,
    pub x_star: Vec<f64>,
}

fn case(name: &'static str, f: Box<dyn SetFunction>, x_star: Vec<f64>) -> KnownCase {
    KnownCase {
        name,
        oracle: SubmodularOracle::new(f).expect("fixture ground sets are nonempty"),
        x_star,
    }
}

/// Fixtures with analytic `x*`: the symmetric pair (`x* = 0`), modular
/// functions (`x* = w`), and symmetric functions (`x* = f([n])/n · 1`).
pub fn known_minnorm_cases() -> Vec<KnownCase> {
    let pair = FnSetFunction::new(2, |s: &[bool]| if s[0] ^ s[1] { 1.0 } else { 0.0 })
        .integer_valued(true);
    let complete_cut = FnSetFunction::new(5, |s: &[bool]| {
        let k = s.iter().filter(|&&b| b).count();
        (k * (5 - k)) as f64
    })
    .integer_valued(true);
    let capped = ConcaveCardinality::new(vec![0.0, 1.0, 2.0, 2.0, 2.0], vec![0.0; 4])
        .expect("concave table");
    let sqrt_table: Vec<f64> = (0..=6).map(|k| (k as f64).sqrt()).collect();
    let sqrt_card = ConcaveCardinality::new(sqrt_table, vec![0.0; 6]).expect("concave table");
    vec![
        case("symmetric-pair", Box::new(pair), vec![0.0, 0.0]),
        case(
            "modular-3",
            Box::new(Modular::new(vec![3.0, -1.0, 2.0]).expect("finite")),
            vec![3.0, -1.0, 2.0],
        ),
        case(
            "modular-6",
            Box::new(Modular::new(vec![0.5, -2.0, 0.0, 4.0, -1.5, 1.0]).expect("finite")),
            vec![0.5, -2.0, 0.0, 4.0, -1.5, 1.0],
        ),
        case("complete-graph-cut-5", Box::new(complete_cut), vec![0.0; 5]),
        case("capped-cardinality-4", Box::new(capped), vec![0.5; 4]),
        case("sqrt-cardinality-6", Box::new(sqrt_card), vec![6f64.sqrt() / 6.0; 6]),
    ]
}
