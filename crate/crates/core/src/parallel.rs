//! Deterministic data-parallel map over instance batches.
//!
//! All ensemble drivers funnel through [`map_indexed`], which preserves input
//! order in its output regardless of worker count, so results (and the files
//! serialized from them) are byte-identical for any parallelism setting.
//!
//! With the `parallel` feature (default) the work runs on a dedicated rayon
//! pool; without it the same code degrades to a sequential loop and the
//! `workers` argument is ignored.

/// Worker-count selector. `Auto` lets rayon pick (all cores); `Fixed(1)` is
/// fully sequential even with the feature enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Auto,
    Fixed(usize),
}

impl Parallelism {
    pub fn from_workers(workers: usize) -> Self {
        if workers == 0 {
            Parallelism::Auto
        } else {
            Parallelism::Fixed(workers)
        }
    }
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism::Auto
    }
}

#[cfg(feature = "parallel")]
pub fn map_indexed<T, U, F>(items: Vec<T>, workers: Parallelism, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match workers {
        Parallelism::Fixed(1) => items.into_iter().map(f).collect(),
        Parallelism::Auto => items.into_par_iter().map(f).collect(),
        Parallelism::Fixed(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .expect("rayon pool construction cannot fail for k >= 1");
            pool.install(|| items.into_par_iter().map(f).collect())
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, U, F>(items: Vec<T>, _workers: Parallelism, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}
