//! Data-parallel map used by sample sweeps. With the `parallel` feature
//! the work is spread over the rayon pool; without it, or through
//! [`map_sequential`], items are processed in order on the calling thread.
//! Output order always matches input order.

/// Maps `f` over `items` using the build's default strategy.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// True when this build spreads sweeps over threads.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
