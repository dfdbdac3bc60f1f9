//! Execution kernels for the data-parallel inner loops.
//!
//! Every bulk sweep in this crate (Cayley-table fills, all-pairs checks,
//! local-invariant sweeps) funnels through the three helpers here. With the
//! `parallel` feature (default) they dispatch to rayon; without it the crate
//! is fully sequential. The `*_seq` variants are always compiled so callers
//! and benches can compare both paths.

/// Sequential map over `0..len` collecting into a `Vec`.
pub fn map_range_seq<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

/// Sequential check that `pred` holds on all of `0..len`.
pub fn all_range_seq<F>(len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool,
{
    (0..len).all(pred)
}

/// Sequential search for the minimising index under `key` (ties to the
/// smallest index); `None` for an empty range.
pub fn min_by_key_seq<K, F>(len: usize, key: F) -> Option<usize>
where
    K: Ord,
    F: Fn(usize) -> K,
{
    (0..len).min_by_key(|&i| (key(i), i))
}

#[cfg(feature = "parallel")]
mod par {
    use rayon::prelude::*;

    pub fn map_range_par<T, F>(len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).into_par_iter().map(f).collect()
    }

    pub fn all_range_par<F>(len: usize, pred: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        (0..len).into_par_iter().all(pred)
    }

    pub fn min_by_key_par<K, F>(len: usize, key: F) -> Option<usize>
    where
        K: Ord + Send,
        F: Fn(usize) -> K + Sync + Send,
    {
        (0..len)
            .into_par_iter()
            .map(|i| (key(i), i))
            .min()
            .map(|(_, i)| i)
    }
}

#[cfg(feature = "parallel")]
pub use par::{all_range_par, map_range_par, min_by_key_par};

/// Map over `0..len`, parallel when the `parallel` feature is on.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        // Tiny ranges are not worth the fork/join overhead.
        if len >= 1 << 10 {
            return map_range_par(len, f);
        }
    }
    map_range_seq(len, f)
}

/// All-quantified predicate over `0..len`, parallel when enabled.
pub fn all_range<F>(len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if len >= 1 << 10 {
            return all_range_par(len, pred);
        }
    }
    all_range_seq(len, pred)
}

/// Index minimising `key` over `0..len`, ties to the smallest index.
pub fn min_by_key<K, F>(len: usize, key: F) -> Option<usize>
where
    K: Ord + Send,
    F: Fn(usize) -> K + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if len >= 1 << 12 {
            return min_by_key_par(len, key);
        }
    }
    min_by_key_seq(len, key)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seq_and_default_agree() {
        let f = |i: usize| (i * i) % 97;
        assert_eq!(map_range_seq(2000, f), map_range(2000, f));
        assert!(all_range(5000, |i| i < 5000));
        assert!(!all_range(5000, |i| i != 4999));
        assert_eq!(min_by_key(6000, |i| (i as i64 - 4321).abs()), Some(4321));
        assert_eq!(min_by_key_seq(0, |i| i), None);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn par_matches_seq() {
        let f = |i: usize| i.wrapping_mul(2654435761) % 1013;
        assert_eq!(map_range_seq(3000, f), map_range_par(3000, f));
        assert_eq!(
            min_by_key_seq(3000, |i| f(i)),
            min_by_key_par(3000, |i| f(i))
        );
        assert_eq!(
            all_range_seq(3000, |i| f(i) < 1013),
            all_range_par(3000, |i| f(i) < 1013)
        );
    }
}
