//! Strategy switch between data-parallel and sequential execution.
//!
//! Enumeration and candidate-filtering loops go through these helpers. With the
//! `parallel` feature (default) they run on rayon; without it, or when
//! [`set_force_sequential`] is active, they run sequentially. Results are
//! order-preserving either way, so outputs are identical across strategies.

use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Force the sequential fallback even when compiled with `parallel`.
/// Used by the benchmark suite to compare both strategies in one binary.
pub fn set_force_sequential(force: bool) {
    FORCE_SEQUENTIAL.store(force, Ordering::SeqCst);
}

pub fn is_sequential() -> bool {
    cfg!(not(feature = "parallel")) || FORCE_SEQUENTIAL.load(Ordering::SeqCst)
}

pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

pub fn filter_map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        return items.par_iter().filter_map(f).collect();
    }
    items.iter().filter_map(f).collect()
}

/// First `Some` over the index range `0..len`, by index order.
/// Deterministic also in the parallel case (`find_map_first`).
pub fn first_match<U, F>(len: u64, f: F) -> Option<U>
where
    U: Send,
    F: Fn(u64) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        return (0..len).into_par_iter().find_map_first(&f);
    }
    (0..len).find_map(f)
}

/// Collect `Some` results over the index range `0..len`, in index order.
pub fn range_filter_map<U, F>(len: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        return (0..len).into_par_iter().filter_map(&f).collect();
    }
    (0..len).filter_map(f).collect()
}
