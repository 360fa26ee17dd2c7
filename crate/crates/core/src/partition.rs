//! Work partitioning for exhaustive scans.

use alloc::vec::Vec;

/// Maps an index range to results, possibly in parallel. Results come back in index order.
pub trait Executor: Sync {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Runs everything on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..n).map(f).collect()
    }
}

/// Splits `[1, end]` into consecutive closed ranges, cutting at every value of
/// `cuts` that lies inside and otherwise every `chunk` integers.
pub fn segments(end: u64, cuts: &[u64], chunk: u64) -> Vec<(u64, u64)> {
    let mut stops: Vec<u64> = cuts.iter().copied().filter(|&c| c >= 1 && c < end).collect();
    stops.push(end);
    stops.sort_unstable();
    stops.dedup();
    let mut out = Vec::new();
    let mut start = 1u64;
    for stop in stops {
        while stop - start + 1 > chunk {
            out.push((start, start + chunk - 1));
            start += chunk;
        }
        if start <= stop {
            out.push((start, stop));
            start = stop + 1;
        }
    }
    out
}
