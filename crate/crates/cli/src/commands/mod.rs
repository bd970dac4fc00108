pub mod check;
pub mod constants;
pub mod histogram;
pub mod rate;
pub mod sample;

use anyhow::{Context, Result};

/// Runs `f` on a pool of `workers` threads, or on the global pool.
pub fn with_pool<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .context("building worker pool")?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

pub fn warn(lines: &[String]) {
    for line in lines {
        eprintln!("warning: {line}");
    }
}
