//! Deterministic chunked map/reduce for Monte Carlo sweeps.
//!
//! Work is split into fixed-size index chunks; each chunk is mapped to a
//! partial result and the partials are folded in chunk order. Because chunk
//! boundaries are fixed and every sample owns its RNG stream, the combined
//! result is bit-identical whether chunks run on one thread or many.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk size used by all Monte Carlo drivers.
pub const CHUNK_SIZE: usize = 4096;

fn chunk_ranges(n: usize, size: usize) -> Vec<Range<usize>> {
    let mut out = Vec::with_capacity(n.div_ceil(size));
    let mut start = 0;
    while start < n {
        let end = (start + size).min(n);
        out.push(start..end);
        start = end;
    }
    out
}

/// Map fixed chunks of `0..n` sequentially, in chunk order.
pub fn map_chunks_seq<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(Range<usize>) -> R,
{
    chunk_ranges(n, CHUNK_SIZE).into_iter().map(f).collect()
}

/// Map fixed chunks of `0..n` on the rayon pool; the output vector is in
/// chunk order, so downstream folds are deterministic.
#[cfg(feature = "parallel")]
pub fn map_chunks_par<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<usize>) -> R + Sync + Send,
{
    chunk_ranges(n, CHUNK_SIZE).into_par_iter().map(f).collect()
}

/// Map fixed chunks of `0..n` using the configured backend.
#[cfg(feature = "parallel")]
pub fn map_chunks<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<usize>) -> R + Sync + Send,
{
    map_chunks_par(n, f)
}

/// Sequential fallback used when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn map_chunks<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<usize>) -> R + Sync + Send,
{
    map_chunks_seq(n, f)
}

/// Cap the global worker pool at `n` threads. Only affects throughput; the
/// chunked reductions give the same bits at any pool size. Returns false
/// when the pool was already initialised or the backend is sequential.
#[cfg(feature = "parallel")]
pub fn configure_thread_pool(n: usize) -> bool {
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_ok()
}

#[cfg(not(feature = "parallel"))]
pub fn configure_thread_pool(_n: usize) -> bool {
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range_exactly() {
        let ranges = chunk_ranges(CHUNK_SIZE * 3 + 17, CHUNK_SIZE);
        assert_eq!(ranges.len(), 4);
        assert_eq!(ranges[0], 0..CHUNK_SIZE);
        assert_eq!(ranges[3], 3 * CHUNK_SIZE..3 * CHUNK_SIZE + 17);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential_bitwise() {
        let f = |r: Range<usize>| -> f64 {
            let mut s = 0.0;
            for i in r {
                let mut src = crate::numerics::RngStream::new(9, i as u64).normals();
                s += src.sample_standard_normal();
            }
            s
        };
        let a: Vec<f64> = map_chunks_seq(20_000, f);
        let b: Vec<f64> = map_chunks_par(20_000, f);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
