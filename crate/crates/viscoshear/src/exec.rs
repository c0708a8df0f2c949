//! Thread-pool executor for the core crate's parallel maps.

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use viscoshear_core::exec::Executor;

pub const THREADS_VAR: &str = "VISCOSHEAR_THREADS";

pub struct Pool {
    pool: ThreadPool,
}

impl Pool {
    /// `threads = 0` picks the number of available cores.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        Ok(Self { pool: ThreadPoolBuilder::new().num_threads(threads).build()? })
    }

    /// Worker count from `VISCOSHEAR_THREADS` (unset, empty or 0 = auto).
    pub fn from_env() -> Result<Self, String> {
        let threads = match std::env::var(THREADS_VAR) {
            Ok(v) if !v.trim().is_empty() => {
                v.trim().parse::<usize>().map_err(|_| format!("{THREADS_VAR} must be a nonnegative integer, got '{v}'"))?
            }
            _ => 0,
        };
        Self::new(threads).map_err(|e| e.to_string())
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Pool {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync,
    {
        let f = &f;
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let p = Pool::new(4).unwrap();
        let v: Vec<usize> = (0..1000).collect();
        assert_eq!(p.map(&v, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
