//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) work is dispatched through rayon;
//! without it, or after [`set_parallel`] disables it at runtime, the same
//! entry points run sequentially. Callers rely on order-preserving maps and
//! commutative reductions, so results never depend on the worker count.

use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Runtime switch between the parallel and sequential paths. Mostly useful
/// for benchmarking; certified outputs are identical either way.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled, Ordering::SeqCst);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::SeqCst)
}

/// Caps the global worker pool. `0` keeps the library default. Returns the
/// effective setting; calling it twice is harmless (the first call wins).
pub fn configure_threads(threads: usize) -> usize {
    #[cfg(feature = "parallel")]
    {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
        if parallel_enabled() {
            return rayon::current_num_threads();
        }
        1
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        1
    }
}

/// Order-preserving map over a slice.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Map an index range and fold the results with a commutative, associative
/// merge.
pub fn map_reduce_range<U, F, R>(n: u64, f: F, identity: impl Fn() -> U + Sync + Send, merge: R) -> U
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
    R: Fn(U, U) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return (0..n).into_par_iter().map(f).reduce(&identity, &merge);
    }
    (0..n).map(f).fold(identity(), merge)
}
