use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::is_prime;
use crate::{Error, Result};

/// Default cap on `#P`; the divisor lattice has `2^#P` elements.
pub const DEFAULT_PRIME_SET_CAP: usize = 16;

/// A finite set of primes with `Q = ∏ p` and `φ(Q) = ∏ (p − 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrimeSet {
    primes: Vec<u64>,
    q: BigUint,
    phi_q: BigUint,
}

/// A divisor `m | Q` with its Möbius value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedDivisor {
    pub m: BigUint,
    pub mu: i8,
}

impl PrimeSet {
    /// Sorts the input; rejects duplicates, non-primes and empty sets.
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut primes: Vec<u64> = primes.into_iter().collect();
        if primes.is_empty() {
            return Err(Error::Domain("prime set must be nonempty".into()));
        }
        primes.sort_unstable();
        if let Some(w) = primes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("duplicate prime {}", w[0])));
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let q = primes.iter().fold(BigUint::one(), |acc, &p| acc * p);
        let phi_q = primes.iter().fold(BigUint::one(), |acc, &p| acc * (p - 1));
        Ok(PrimeSet { primes, q, phi_q })
    }

    /// `{p prime : p ≤ k}`.
    pub fn up_to(k: u64) -> Result<Self> {
        PrimeSet::new((2..=k).filter(|&p| is_prime(p)))
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn phi_q(&self) -> &BigUint {
        &self.phi_q
    }

    pub fn q_u128(&self) -> Option<u128> {
        self.q.to_u128()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    pub fn with(&self, p: u64) -> Result<Self> {
        PrimeSet::new(self.primes.iter().copied().chain(std::iter::once(p)))
    }

    /// `gcd(n, Q) = 1`.
    pub fn is_coprime(&self, n: u64) -> bool {
        self.primes.iter().all(|&p| !n.is_multiple_of(p))
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeSet{self}")
    }
}

/// All divisors of `Q` with Möbius signs, ascending in `m`.
pub fn squarefree_divisors(p: &PrimeSet) -> Result<Vec<SignedDivisor>> {
    squarefree_divisors_capped(p, DEFAULT_PRIME_SET_CAP)
}

pub fn squarefree_divisors_capped(p: &PrimeSet, cap: usize) -> Result<Vec<SignedDivisor>> {
    if p.len() > cap {
        return Err(Error::Budget(format!(
            "prime set has {} elements, cap is {cap}",
            p.len()
        )));
    }
    let mut out = vec![SignedDivisor {
        m: BigUint::one(),
        mu: 1,
    }];
    for &prime in p.primes() {
        let extra: Vec<SignedDivisor> = out
            .iter()
            .map(|d| SignedDivisor {
                m: &d.m * prime,
                mu: -d.mu,
            })
            .collect();
        out.extend(extra);
    }
    out.sort_by(|a, b| a.m.cmp(&b.m));
    Ok(out)
}
