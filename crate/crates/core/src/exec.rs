//! Sequential or data-parallel evaluation of the counting kernels.
//!
//! With the `parallel` feature disabled, [`Exec::Parallel`] runs the
//! sequential code path, so results never depend on the mode.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `items` and folds the results with `combine`, in the
    /// order of `items`.
    pub fn map_reduce<T, R, F, C>(self, items: &[T], identity: R, f: F, combine: C) -> R
    where
        T: Sync,
        R: Send + Sync + Clone,
        F: Fn(&T) -> R + Sync + Send,
        C: Fn(R, R) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items
                .par_iter()
                .map(&f)
                .reduce(|| identity.clone(), &combine);
        }
        items.iter().map(f).fold(identity, combine)
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }
}

/// Runs `f` on a pool of `threads` workers (or inline without the
/// `parallel` feature).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
        {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}
