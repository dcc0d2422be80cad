//! Data-parallel helpers with a sequential fallback.
//!
//! With the `rayon` feature (on by default) [`Strategy::Parallel`] runs on
//! the rayon thread pool; without it every strategy runs sequentially.
//! Results are always returned in input order, so verdicts do not depend on
//! the strategy.

#[cfg(feature = "rayon")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "rayon") && self == Strategy::Parallel
    }
}

/// Ordered map over a slice.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "rayon")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// Ordered map over `0..len`.
pub fn map_range<R, F>(strategy: Strategy, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "rayon")]
    if strategy.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = strategy;
    (0..len).map(f).collect()
}

/// Ordered filter over a slice, cloning the kept items.
pub fn filter<T, F>(strategy: Strategy, items: &[T], pred: F) -> Vec<T>
where
    T: Sync + Send + Clone,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "rayon")]
    if strategy.is_parallel() {
        return items.par_iter().filter(|x| pred(x)).cloned().collect();
    }
    let _ = strategy;
    items.iter().filter(|x| pred(x)).cloned().collect()
}

/// Ordered filter-map over `0..len` in chunks, for scans too large to
/// materialize up front.
pub fn filter_map_range<R, F>(strategy: Strategy, len: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "rayon")]
    if strategy.is_parallel() {
        return (0..len).into_par_iter().filter_map(f).collect();
    }
    let _ = strategy;
    (0..len).filter_map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map(Strategy::Sequential, &xs, |x| x * x);
        let par = map(Strategy::Parallel, &xs, |x| x * x);
        assert_eq!(seq, par);
        let seq = filter_map_range(Strategy::Sequential, 500, |x| (x % 7 == 0).then_some(x));
        let par = filter_map_range(Strategy::Parallel, 500, |x| (x % 7 == 0).then_some(x));
        assert_eq!(seq, par);
        assert_eq!(filter(Strategy::Parallel, &xs, |x| x % 3 == 0).len(), 334);
    }
}
