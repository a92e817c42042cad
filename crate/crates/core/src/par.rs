//! Execution strategy for data-parallel work.
//!
//! `Exec::Parallel` uses rayon when the `parallel` feature is enabled and
//! falls back to sequential evaluation otherwise. Every caller produces the
//! same result under both strategies; only wall time differs.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Sequential,
    Parallel,
}

impl Exec {
    /// Parallel when the feature is compiled in, sequential otherwise.
    pub fn auto() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Order-preserving map.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn join<A, B, RA, RB>(self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return rayon::join(a, b);
        }
        (a(), b())
    }

    /// How many queued items to evaluate speculatively at once.
    pub fn batch_size(self) -> usize {
        if self.is_parallel() {
            #[cfg(feature = "parallel")]
            return 4 * rayon::current_num_threads().max(1);
        }
        1
    }
}

/// Runs `f` inside a rayon pool with `jobs` threads. `jobs == 1` or a build
/// without the `parallel` feature runs `f` with [`Exec::Sequential`].
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce(Exec) -> R + Send) -> R {
    match jobs {
        Some(1) => f(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| f(Exec::Parallel)),
            Err(_) => f(Exec::Parallel),
        },
        _ => f(Exec::auto()),
    }
}
