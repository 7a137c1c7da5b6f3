//! Dispatch layer between rayon and plain sequential loops.
//!
//! Every helper here produces results that are bitwise independent of the
//! thread count: parallel maps preserve index order and reductions sum
//! fixed-size chunk partials in chunk order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many elements the parallel dispatch falls back to a plain loop.
#[cfg_attr(not(feature = "parallel"), allow(dead_code))]
const PAR_THRESHOLD: usize = 1 << 12;

/// Fixed chunk size for deterministic reductions.
const CHUNK: usize = 1 << 14;

/// Map `0..n` into a `Vec`, preserving index order.
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= 2 {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Run `f(i)` for every `i in 0..n`. Disjoint side effects only.
pub(crate) fn for_each_index<F>(n: usize, f: F)
where
    F: Fn(usize) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= PAR_THRESHOLD {
        (0..n).into_par_iter().for_each(f);
        return;
    }
    (0..n).for_each(f);
}

/// Mutate every element of a slice with its index.
pub(crate) fn for_each_mut<T, F>(data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if data.len() >= PAR_THRESHOLD {
        data.par_iter_mut().enumerate().for_each(|(i, x)| f(i, x));
        return;
    }
    data.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

/// Deterministic chunked sum of `f(i)` over `0..n`: partials are computed per
/// fixed-size chunk and added in chunk order, so the result does not depend on
/// how chunks were scheduled.
pub(crate) fn sum_chunked<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    if n <= CHUNK {
        return (0..n).map(f).sum();
    }
    let n_chunks = n.div_ceil(CHUNK);
    let partials = map_indexed(n_chunks, |c| {
        let start = c * CHUNK;
        let end = ((c + 1) * CHUNK).min(n);
        let mut s = 0.0;
        for i in start..end {
            s += f(i);
        }
        s
    });
    partials.into_iter().sum()
}

/// Deterministic chunked sum of small per-index vectors (e.g. histogram bins).
pub(crate) fn sum_bins_chunked<F>(n: usize, bins: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    let n_chunks = n.div_ceil(CHUNK).max(1);
    let partials = map_indexed(n_chunks, |c| {
        let start = c * CHUNK;
        let end = ((c + 1) * CHUNK).min(n);
        let mut acc = vec![0.0; bins];
        for i in start..end {
            f(i, &mut acc);
        }
        acc
    });
    let mut total = vec![0.0; bins];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}

/// Shared mutable pointer for gate kernels that write disjoint index sets
/// from parallel iterations.
pub(crate) struct SharedSlice<T>(*mut T);

unsafe impl<T: Send> Send for SharedSlice<T> {}
unsafe impl<T: Send> Sync for SharedSlice<T> {}

impl<T> SharedSlice<T> {
    pub(crate) fn new(data: &mut [T]) -> Self {
        Self(data.as_mut_ptr())
    }

    /// Safety: concurrent callers must touch disjoint indices.
    #[allow(clippy::mut_from_ref)]
    pub(crate) unsafe fn get(&self, i: usize) -> &mut T {
        &mut *self.0.add(i)
    }
}
