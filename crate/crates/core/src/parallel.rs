//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! the rayon pool; without it everything runs on the calling thread. Output
//! order always follows input order.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Splits `0..total` into contiguous ranges for sharded enumeration.
pub fn shards(total: u64) -> Vec<Range<u64>> {
    const SHARD: u64 = 1 << 12;
    let count = total.div_ceil(SHARD).max(1);
    (0..count)
        .map(|k| k * SHARD..((k + 1) * SHARD).min(total))
        .collect()
}

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
pub fn map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

/// Sequential reference path, always available.
pub fn map_sequential<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Whether [`map`] dispatches to rayon in this build.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shards_cover_range_exactly() {
        for total in [0u64, 1, 4095, 4096, 4097, 1 << 20] {
            let s = shards(total);
            let covered: u64 = s.iter().map(|r| r.end - r.start).sum();
            assert_eq!(covered, total);
            for w in s.windows(2) {
                assert_eq!(w[0].end, w[1].start);
            }
        }
    }

    #[test]
    fn map_preserves_order() {
        let items: Vec<u64> = (0..1000).collect();
        let out = map(items.clone(), |x| x * x);
        assert_eq!(out, map_sequential(items, |x| x * x));
    }
}
