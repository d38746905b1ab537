//! Data-parallel helpers. With the `parallel` feature disabled every call
//! runs sequentially regardless of the requested mode.

/// Whether batch work may be spread across the rayon thread pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// True when this build can actually run work in parallel.
    pub fn available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Order-preserving map over a slice; batches shorter than `min_len` run
/// sequentially.
pub(crate) fn map_slice<T, R, F>(mode: Parallelism, items: &[T], min_len: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if mode == Parallelism::Parallel && items.len() >= min_len.max(2) {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = (mode, min_len);
    items.iter().map(f).collect()
}
