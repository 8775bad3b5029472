//! Deterministic parallel map over task indices.

use rayon::prelude::*;

/// Environment variable overriding the configured worker count.
pub const WORKERS_ENV: &str = "FROGLAB_WORKERS";

/// `FROGLAB_WORKERS` if set and positive, else `configured`, else the number
/// of available cores.
pub fn resolve_workers(configured: Option<usize>) -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .or(configured.filter(|&w| w > 0))
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Runs `f(0..count)` on `workers` threads; results come back in task order
/// regardless of which worker ran what.
pub fn parallel_map<R, F>(count: usize, workers: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    if workers <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&f).collect()),
        Err(_) => (0..count).map(f).collect(),
    }
}
