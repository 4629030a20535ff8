//! Draw-level parallelism. With the `parallel` feature draws run on a rayon
//! pool; without it, or with [`Execution::Sequential`], they run in order on
//! the calling thread. Results always come back in index order.

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FGFT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Parallel over draws; `threads: None` reads [`THREADS_ENV`] and falls
    /// back to all available cores.
    Parallel {
        threads: Option<usize>,
    },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { threads: None }
        } else {
            Execution::Sequential
        }
    }
}

/// Positive integer from [`THREADS_ENV`], if set.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
}

pub fn num_threads(exec: Execution) -> usize {
    match exec {
        Execution::Sequential => 1,
        #[cfg(feature = "parallel")]
        Execution::Parallel { threads } => threads
            .or_else(threads_from_env)
            .unwrap_or_else(rayon::current_num_threads),
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel { .. } => 1,
    }
}

/// `(0..count).map(f)` under the requested execution mode.
pub fn map_indexed<R, F>(count: usize, exec: Execution, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Send + Sync,
{
    match exec {
        Execution::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel { threads } => {
            use rayon::prelude::*;
            match threads.or_else(threads_from_env) {
                Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                    Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&f).collect()),
                    Err(_) => (0..count).into_par_iter().map(&f).collect(),
                },
                None => (0..count).into_par_iter().map(f).collect(),
            }
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel { .. } => (0..count).map(f).collect(),
    }
}
