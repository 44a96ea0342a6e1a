//! Segmented odd-only sieve of Eratosthenes.

use rayon::prelude::*;

use crate::{Error, Result};

/// Default largest sieve limit accepted without an explicit budget.
pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000_000;

/// Integers covered per segment (even, so segments start on even numbers).
const SEGMENT_SPAN: u64 = 1 << 19;

/// Primes up to `limit` in ascending order.
pub fn sieve_primes(limit: u64) -> Result<Vec<u32>> {
    sieve_primes_with_budget(limit, DEFAULT_SIEVE_LIMIT)
}

pub fn sieve_primes_with_budget(limit: u64, budget: u64) -> Result<Vec<u32>> {
    if limit > budget || limit > u32::MAX as u64 {
        return Err(Error::Budget(format!(
            "sieve limit {limit} exceeds budget {}",
            budget.min(u32::MAX as u64)
        )));
    }
    if limit < 2 {
        return Ok(Vec::new());
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root);
    let nseg = limit / SEGMENT_SPAN + 1;
    let chunks: Vec<Vec<u32>> = (0..nseg)
        .into_par_iter()
        .map(|s| {
            let lo = s * SEGMENT_SPAN;
            let hi = ((s + 1) * SEGMENT_SPAN).min(limit + 1);
            sieve_segment(lo, hi, &base)
        })
        .collect();
    let mut out = Vec::with_capacity(chunks.iter().map(Vec::len).sum());
    for c in chunks {
        out.extend(c);
    }
    Ok(out)
}

fn simple_sieve(limit: u64) -> Vec<u32> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in `[lo, hi)`; `lo` is even.
fn sieve_segment(lo: u64, hi: u64, base: &[u32]) -> Vec<u32> {
    if hi <= lo {
        return Vec::new();
    }
    // index i <-> odd number lo + 2i + 1
    let len = ((hi - lo) / 2) as usize;
    let mut composite = vec![false; len];
    for &p in base.iter().skip(1) {
        let p = p as u64;
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(lo.div_ceil(p) * p);
        if start.is_multiple_of(2) {
            start += p;
        }
        let mut j = start;
        while j < hi {
            composite[((j - lo - 1) / 2) as usize] = true;
            j += 2 * p;
        }
    }
    let mut out = Vec::new();
    if lo <= 2 && 2 < hi {
        out.push(2);
    }
    for (i, &c) in composite.iter().enumerate() {
        let v = lo + 2 * i as u64 + 1;
        if !c && v >= 3 {
            out.push(v as u32);
        }
    }
    out
}

/// Sorted prime list with `π(x)` lookups.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        Ok(PrimeTable {
            limit,
            primes: sieve_primes(limit)?,
        })
    }

    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        Ok(PrimeTable {
            limit,
            primes: sieve_primes_with_budget(limit, budget)?,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Number of primes `≤ x`; `x` must not exceed the table limit.
    pub fn pi(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::Budget(format!(
                "pi({x}) beyond table limit {}",
                self.limit
            )));
        }
        if x > u32::MAX as u64 {
            return Ok(self.primes.len() as u64);
        }
        Ok(self.primes.partition_point(|&p| p as u64 <= x) as u64)
    }

    /// Primes in `(lo, hi]`.
    pub fn count_between(&self, lo: u64, hi: u64) -> Result<u64> {
        Ok(self.pi(hi)?.saturating_sub(self.pi(lo)?))
    }
}
