//! Execution strategy for bulk evaluation.
//!
//! With the `parallel` feature (default) bulk maps run on the rayon thread
//! pool; without it they run sequentially with identical results. Callers
//! that need a sequential pass regardless of features use the `_seq`
//! variants exported from the engine.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `op` over the items, in parallel when the feature allows.
#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, U, F>(items: &[T], op: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(op).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, U, F>(items: &[T], op: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(op).collect()
}

/// Sequential map with the same signature, for baseline comparisons.
pub(crate) fn map_collect_seq<T, U, F>(items: &[T], op: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(op).collect()
}
