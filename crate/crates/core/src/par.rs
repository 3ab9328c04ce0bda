//! Execution switch for the data-parallel inner loops. With the `parallel`
//! feature (the default) these run on the rayon pool; without it the same
//! call sites fold sequentially. Every accumulator used here is associative
//! and commutative, so results are independent of the worker count.

/// Ranges shorter than this are folded inline; forking the pool costs more
/// than the scan itself.
#[cfg(feature = "parallel")]
const PARALLEL_THRESHOLD: u64 = 4096;

#[cfg(feature = "parallel")]
pub(crate) fn fold_range<T, I, F, R>(range: std::ops::Range<u64>, identity: I, fold: F, combine: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, u64) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if range.end - range.start < PARALLEL_THRESHOLD {
        return range.fold(identity(), fold);
    }
    range
        .into_par_iter()
        .fold(&identity, &fold)
        .reduce(&identity, combine)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn fold_range<T, I, F, R>(range: std::ops::Range<u64>, identity: I, fold: F, combine: R) -> T
where
    I: Fn() -> T,
    F: Fn(T, u64) -> T,
    R: Fn(T, T) -> T,
{
    let _ = combine;
    range.fold(identity(), fold)
}

#[cfg(feature = "parallel")]
pub(crate) fn any_in_range<P>(range: std::ops::Range<u64>, pred: P) -> bool
where
    P: Fn(u64) -> bool + Sync + Send,
{
    use rayon::prelude::*;
    if range.end - range.start < PARALLEL_THRESHOLD {
        return range.into_iter().any(pred);
    }
    range.into_par_iter().any(pred)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn any_in_range<P>(range: std::ops::Range<u64>, pred: P) -> bool
where
    P: Fn(u64) -> bool,
{
    range.into_iter().any(pred)
}

#[cfg(feature = "parallel")]
pub(crate) fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
