//! Evaluation-oracle plumbing: the [`SetFunction`] trait user code implements
//! and the [`SubmodularOracle`] wrapper that normalizes `f(∅) = 0` and counts
//! evaluations.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// A set function over the ground set `{0, .., n-1}`.
///
/// Sets are passed as membership masks of length `n`. Implementations must be
/// safe to evaluate concurrently.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, set: &[bool]) -> f64;

    /// Values on the nested chain `{order[0]}`, `{order[0], order[1]}`, ..,
    /// `order` (the empty set is not included). Families with a cheap
    /// marginal update override this; the default evaluates each prefix.
    fn chain_values(&self, order: &[usize]) -> Vec<f64> {
        let mut mask = vec![false; self.ground_size()];
        order
            .iter()
            .map(|&i| {
                mask[i] = true;
                self.value(&mask)
            })
            .collect()
    }

    /// Whether every value is an integer. Enables the exact default tolerance.
    fn is_integer_valued(&self) -> bool {
        false
    }
}

impl<T: SetFunction + ?Sized> SetFunction for Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[bool]) -> f64 {
        (**self).value(set)
    }
    fn chain_values(&self, order: &[usize]) -> Vec<f64> {
        (**self).chain_values(order)
    }
    fn is_integer_valued(&self) -> bool {
        (**self).is_integer_valued()
    }
}

impl<T: SetFunction + ?Sized> SetFunction for Arc<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[bool]) -> f64 {
        (**self).value(set)
    }
    fn chain_values(&self, order: &[usize]) -> Vec<f64> {
        (**self).chain_values(order)
    }
    fn is_integer_valued(&self) -> bool {
        (**self).is_integer_valued()
    }
}

impl<T: SetFunction + ?Sized> SetFunction for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[bool]) -> f64 {
        (**self).value(set)
    }
    fn chain_values(&self, order: &[usize]) -> Vec<f64> {
        (**self).chain_values(order)
    }
    fn is_integer_valued(&self) -> bool {
        (**self).is_integer_valued()
    }
}

/// A set function given by a closure.
pub struct FnSetFunction<G> {
    n: usize,
    f: G,
    integer: bool,
}

impl<G> FnSetFunction<G>
where
    G: Fn(&[bool]) -> f64 + Send + Sync,
{
    pub fn new(n: usize, f: G) -> Self {
        Self {
            n,
            f,
            integer: false,
        }
    }

    pub fn integer_valued(mut self, yes: bool) -> Self {
        self.integer = yes;
        self
    }
}

impl<G> SetFunction for FnSetFunction<G>
where
    G: Fn(&[bool]) -> f64 + Send + Sync,
{
    fn ground_size(&self) -> usize {
        self.n
    }
    fn value(&self, set: &[bool]) -> f64 {
        (self.f)(set)
    }
    fn is_integer_valued(&self) -> bool {
        self.integer
    }
}

/// Evaluation oracle with `f(∅) = 0` normalization and an evaluation counter.
///
/// Every user function is wrapped as `f'(S) = f(S) - f(∅)`; minimizers are
/// unchanged. The counter increments once per set evaluated through
/// [`eval`](Self::eval) or [`eval_chain`](Self::eval_chain). The single
/// evaluation of `f(∅)` made at construction is not counted, and nothing is
/// memoized across calls except the value returned by
/// [`compute_f`](Self::compute_f).
pub struct SubmodularOracle<F> {
    inner: F,
    n: usize,
    offset: f64,
    eo: AtomicU64,
    f_max: OnceLock<f64>,
}

impl<F: SetFunction> SubmodularOracle<F> {
    pub fn new(inner: F) -> Result<Self> {
        let n = inner.ground_size();
        if n == 0 {
            return Err(Error::InvalidInput("empty ground set".into()));
        }
        let offset = inner.value(&vec![false; n]);
        if !offset.is_finite() {
            return Err(Error::InvalidInput("f(∅) is not finite".into()));
        }
        Ok(Self {
            inner,
            n,
            offset,
            eo: AtomicU64::new(0),
            f_max: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    /// The raw `f(∅)` subtracted from every value.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn is_integer_valued(&self) -> bool {
        self.inner.is_integer_valued() && self.offset.fract() == 0.0
    }

    pub fn eval(&self, set: &[bool]) -> f64 {
        debug_assert_eq!(set.len(), self.n);
        self.eo.fetch_add(1, Ordering::Relaxed);
        self.inner.value(set) - self.offset
    }

    pub fn eval_indices(&self, members: &[usize]) -> f64 {
        let mut mask = vec![false; self.n];
        for &i in members {
            mask[i] = true;
        }
        self.eval(&mask)
    }

    /// Normalized values on the chain of prefixes of `order`; costs
    /// `order.len()` evaluations.
    pub fn eval_chain(&self, order: &[usize]) -> Vec<f64> {
        self.eo.fetch_add(order.len() as u64, Ordering::Relaxed);
        let mut vals = self.inner.chain_values(order);
        for v in &mut vals {
            *v -= self.offset;
        }
        vals
    }

    pub fn eo_count(&self) -> u64 {
        self.eo.load(Ordering::Relaxed)
    }

    pub fn reset_eo_count(&self) {
        self.eo.store(0, Ordering::Relaxed);
    }

    /// `max_i max(|f({i})|, |f([n]) - f([n] \ i)|)`, computed once and cached.
    pub fn compute_f(&self) -> f64 {
        *self.f_max.get_or_init(|| {
            let n = self.n;
            let full = self.eval(&vec![true; n]);
            let mut mask = vec![false; n];
            let mut best: f64 = 0.0;
            for i in 0..n {
                mask[i] = true;
                best = best.max(self.eval(&mask).abs());
                mask[i] = false;
            }
            let mut mask = vec![true; n];
            for i in 0..n {
                mask[i] = false;
                best = best.max((full - self.eval(&mask)).abs());
                mask[i] = true;
            }
            best
        })
    }
}

/// Membership mask for a list of indices.
pub fn mask_from_indices(n: usize, members: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &i in members {
        mask[i] = true;
    }
    mask
}

/// Sorted index list of a membership mask.
pub fn indices_from_mask(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_empty_set() {
        let f = FnSetFunction::new(2, |s: &[bool]| 5.0 + s.iter().filter(|&&b| b).count() as f64);
        let o = SubmodularOracle::new(f).unwrap();
        assert_eq!(o.offset(), 5.0);
        assert_eq!(o.eval(&[false, false]), 0.0);
        assert_eq!(o.eval(&[true, true]), 2.0);
    }

    #[test]
    fn counts_each_raw_evaluation() {
        let f = FnSetFunction::new(3, |_: &[bool]| 0.0);
        let o = SubmodularOracle::new(f).unwrap();
        assert_eq!(o.eo_count(), 0);
        o.eval(&[true, false, false]);
        o.eval_chain(&[2, 0, 1]);
        assert_eq!(o.eo_count(), 4);
        o.reset_eo_count();
        assert_eq!(o.eo_count(), 0);
    }

    #[test]
    fn chain_default_matches_direct_evaluation() {
        let f = FnSetFunction::new(3, |s: &[bool]| {
            let k = s.iter().filter(|&&b| b).count() as f64;
            k * (3.0 - k) + if s[1] { 2.0 } else { 0.0 }
        });
        let o = SubmodularOracle::new(f).unwrap();
        let chain = o.eval_chain(&[1, 2, 0]);
        assert_eq!(chain, vec![o.eval_indices(&[1]), o.eval_indices(&[1, 2]), o.eval_indices(&[0, 1, 2])]);
    }

    #[test]
    fn f_max_on_symmetric_pair() {
        let f = FnSetFunction::new(2, |s: &[bool]| if s[0] ^ s[1] { 1.0 } else { 0.0 });
        let o = SubmodularOracle::new(f).unwrap();
        assert_eq!(o.compute_f(), 1.0);
        let before = o.eo_count();
        o.compute_f();
        assert_eq!(o.eo_count(), before, "cached");
    }

    #[test]
    fn rejects_empty_ground_set() {
        let f = FnSetFunction::new(0, |_: &[bool]| 0.0);
        assert!(SubmodularOracle::new(f).is_err());
    }
}
