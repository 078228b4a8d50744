//! Execution strategy for the enumeration loops.
//!
//! Every exhaustive scan in the crate goes through [`Exec`]. With the
//! `parallel` feature (on by default) [`Exec::Parallel`] fans out over rayon;
//! without it, both variants run the same sequential code. Reductions are
//! associative and commutative, so results never depend on the schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

/// Default node/candidate budget for searches and enumerations.
pub const DEFAULT_WORK_LIMIT: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub exec: Exec,
    pub work_limit: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            exec: Exec::default(),
            work_limit: DEFAULT_WORK_LIMIT,
        }
    }
}

impl Options {
    pub fn sequential() -> Self {
        Options {
            exec: Exec::Sequential,
            ..Options::default()
        }
    }

    pub fn with_work_limit(mut self, work_limit: u64) -> Self {
        self.work_limit = work_limit;
        self
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Folds `0..n` into an accumulator, merging per-worker partials.
    pub fn fold_range<A, F, R>(self, n: u64, identity: impl Fn() -> A + Sync + Send, fold: F, reduce: R) -> A
    where
        A: Send,
        F: Fn(A, u64) -> A + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n)
                .into_par_iter()
                .fold(&identity, &fold)
                .reduce(&identity, &reduce);
        }
        let _ = &reduce;
        (0..n).fold(identity(), fold)
    }

    pub fn count_range<F>(self, n: u64, pred: F) -> u64
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        self.fold_range(n, || 0u64, |acc, i| acc + pred(i) as u64, |a, b| a + b)
    }

    pub fn map_range<T, F>(self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    pub fn map_slice<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }
}
