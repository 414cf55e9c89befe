//! Execution strategy for the data-parallel loops of the crate.
//!
//! Exhaustive group scans, Monte Carlo sampling, optimizer restarts and the
//! randomized property suites all run as independent work items indexed by
//! `0..count`. Every item derives its own random stream from `(seed, index)`,
//! so results never depend on how the items are scheduled.
//!
//! With the `parallel` feature (on by default) [`Strategy::Parallel`] uses
//! rayon; without it both strategies run on the calling thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// Whether work will actually be spread over a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }

    /// Evaluates `f` on every index in `0..count`, preserving index order.
    pub fn map<R, F>(self, count: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..count).into_par_iter().map(f).collect();
        }
        (0..count).map(f).collect()
    }

    pub fn all<F>(self, count: u64, f: F) -> bool
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..count).into_par_iter().all(f);
        }
        (0..count).all(f)
    }

    /// Smallest index satisfying `f`, independent of scheduling.
    pub fn find_first<F>(self, count: u64, f: F) -> Option<u64>
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..count).into_par_iter().find_first(|&i| f(i));
        }
        (0..count).find(|&i| f(i))
    }

    pub fn count<F>(self, count: u64, f: F) -> u64
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..count).into_par_iter().filter(|&i| f(i)).count() as u64;
        }
        (0..count).filter(|&i| f(i)).count() as u64
    }
}

/// Deterministic random stream for work item `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn strategies_agree() {
        let f = |i: u64| i * i % 7;
        assert_eq!(Strategy::Sequential.map(1000, f), Strategy::Parallel.map(1000, f));
        assert_eq!(
            Strategy::Sequential.count(1000, |i| i % 3 == 0),
            Strategy::Parallel.count(1000, |i| i % 3 == 0)
        );
        assert_eq!(Strategy::Parallel.find_first(1000, |i| i > 500 && i % 17 == 0), Some(510));
        assert!(Strategy::Parallel.all(100, |i| i < 100));
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream_rng(7, 3).random();
        let b: u64 = stream_rng(7, 3).random();
        let c: u64 = stream_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
