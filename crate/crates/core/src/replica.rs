//! Order-preserving fan-out of independent replicas.
//!
//! `run_indexed` evaluates a closure at every index in `0..n` and
//! collects the results in index order. With the `parallel` feature it
//! distributes the work over rayon's pool; without it, it degrades to a
//! plain loop. Because each replica derives all randomness from its own
//! index, the two paths produce identical output.

/// Maps `f` over `0..n`, in parallel when available.
#[cfg(feature = "parallel")]
pub fn run_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..n`, in parallel when available.
#[cfg(not(feature = "parallel"))]
pub fn run_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    run_indexed_seq(n, f)
}

/// Sequential reference path; same contract, same output.
pub fn run_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
