use crate::error::{Error, Result};

/// Runs `job` on a dedicated pool of `workers` threads.
pub(crate) fn run_parallel<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Err(Error::InvalidCount("parallelism must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidCount(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}
