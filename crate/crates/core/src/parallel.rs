//! Replica-parallel execution.
//!
//! Replica `i` always receives `derive_seed(seed, i)` and results come back
//! in replica order, so output never depends on the thread count.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::rng::derive_seed;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "GRAPHDIM_THREADS";

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
        {
            if n > 0 {
                builder = builder.num_threads(n);
            }
        }
        builder.build().expect("thread pool")
    })
}

/// Run `f(i, seed_i)` for `i in 0..n` and collect results in order.
pub fn replicas<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, u64) -> T + Sync + Send,
{
    pool().install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| f(i, derive_seed(seed, i as u64)))
            .collect()
    })
}

/// Map `f` over `items` on the shared pool, preserving order.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    pool().install(|| items.par_iter().map(&f).collect())
}
