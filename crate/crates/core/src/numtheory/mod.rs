//! Primes, counting functions, Legendre valuations and the Möbius lattice
//! of a squarefree modulus.

mod lemmas;
mod primeset;
mod sieve;

pub use lemmas::{
    check_legendre, check_pi_bound, check_primorial_bound, check_stirling, LegendreReport,
    MarginCheckpoint, PiBoundReport, PrimorialReport, StirlingReport, EXACT_PRIMORIAL_LIMIT,
};
pub use primeset::{
    squarefree_divisors, squarefree_divisors_capped, PrimeSet, SignedDivisor,
    DEFAULT_PRIME_SET_CAP,
};
pub use sieve::{sieve_primes, sieve_primes_with_budget, PrimeTable, DEFAULT_SIEVE_LIMIT};

use crate::{Error, Result};

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent of `p` in `n!`: `Σ_j ⌊n / p^j⌋`.
pub fn legendre_nu(p: u64, n: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let mut total = 0;
    let mut m = n / p;
    while m > 0 {
        total += m;
        m /= p;
    }
    Ok(total)
}

/// Number of primes in `(k a n, (k+1) a n]`.
pub fn interval_prime_count(k: u64, a: u64, n: u64) -> Result<u64> {
    if k == 0 || a == 0 || n == 0 {
        return Err(Error::Domain("k, a and n must be positive".into()));
    }
    let hi = (k + 1)
        .checked_mul(a)
        .and_then(|v| v.checked_mul(n))
        .ok_or_else(|| Error::Budget("interval end overflows".into()))?;
    let table = PrimeTable::new(hi)?;
    table.count_between(k * a * n, hi)
}
