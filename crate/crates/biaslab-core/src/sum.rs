//! Compensated summation with a deterministic block structure.
//!
//! Sums over integer ranges are split into fixed blocks aligned to absolute
//! indices; each block is accumulated in ascending order with Kahan
//! compensation, and the block partials are folded in index order with a
//! second Kahan accumulator. The result is therefore independent of the
//! number of worker threads.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Kahan compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Block length for deterministic reductions. Fixed: changing it changes
/// the bit pattern of every blocked sum.
pub const BLOCK_LEN: u64 = 1 << 16;

fn block_index(n: u64) -> u64 {
    (n - 1) / BLOCK_LEN
}

fn block_range(idx: u64, hi: u64) -> (u64, u64) {
    let lo = idx * BLOCK_LEN + 1;
    (lo, hi.min((idx + 1) * BLOCK_LEN))
}

fn sum_block<F: Fn(u64) -> f64>(lo: u64, hi: u64, f: &F) -> f64 {
    let mut acc = KahanSum::new();
    for n in lo..=hi {
        acc.add(f(n));
    }
    acc.value()
}

/// Sequential blocked sum of `f(n)` over `1..=hi`.
pub fn blocked_sum_seq<F: Fn(u64) -> f64 + Sync>(hi: u64, f: F) -> f64 {
    if hi == 0 {
        return 0.0;
    }
    let last = block_index(hi);
    let mut acc = KahanSum::new();
    for idx in 0..=last {
        let (lo, bhi) = block_range(idx, hi);
        acc.add(sum_block(lo, bhi, &f));
    }
    acc.value()
}

/// Blocked sum of `f(n)` over `1..=hi`; parallel over blocks when the
/// `parallel` feature is active, bit-identical to [`blocked_sum_seq`].
pub fn blocked_sum<F: Fn(u64) -> f64 + Sync>(hi: u64, f: F) -> f64 {
    if hi == 0 {
        return 0.0;
    }
    let last = block_index(hi);
    let partials = map_blocks(last, |idx| {
        let (lo, bhi) = block_range(idx, hi);
        sum_block(lo, bhi, &f)
    });
    let mut acc = KahanSum::new();
    for s in partials {
        acc.add(s);
    }
    acc.value()
}

/// Map a function over block indices `0..=last`, collecting results in
/// index order. This is the single point where rayon enters the crate.
pub fn map_blocks<T: Send, F: Fn(u64) -> T + Sync + Send>(last: u64, f: F) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..=last).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..=last).map(f).collect()
    }
}

/// Map over an arbitrary index range, order-preserving.
pub fn map_indices<T: Send, F: Fn(usize) -> T + Sync + Send>(count: usize, f: F) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}
