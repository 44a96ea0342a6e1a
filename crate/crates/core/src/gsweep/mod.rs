//! The step function `G(x) = Σ ⌊a_i x⌋ − Σ ⌊b_j x⌋` and its first-crossing
//! thresholds.
//!
//! Two independent evaluators exist for compiled prime-set configurations:
//! [`g_floor`] sums the floors of the (cancelled) factor lists, and
//! [`g_indicator`] counts integers coprime to `Q` below the three scaled
//! arguments `(k+1)Qx`, `kQx`, `Qx`.

mod events;
mod sweep;
mod wheel;

pub use events::sweep_events;
pub use sweep::{sweep, sweep_with, SweepMode, SweepOptions, SweepReport, DEFAULT_EVENT_BUDGET};
pub use wheel::CoprimeWheel;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::Rational;
use crate::numtheory::PrimeSet;
use crate::ratioconfig::RatioConfig;
use crate::{Error, Result};

/// A sample of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GPoint {
    pub x: Rational,
    pub value: i64,
}

/// `G(x)` by floor arithmetic on the factor lists. Requires `x ≥ 0`.
pub fn g_floor(cfg: &RatioConfig, x: &Rational) -> Result<i64> {
    if x.is_negative() {
        return Err(Error::Domain("G is evaluated for x ≥ 0".into()));
    }
    if let (Some(n), Some(d)) = (x.numer().to_u128(), x.denom().to_u128()) {
        if let Some(v) = g_floor_scaled(cfg, n, d) {
            return Ok(v);
        }
    }
    let (n, d) = (x.numer(), x.denom());
    let mut total = BigInt::zero();
    for &v in cfg.a_list() {
        total += (BigInt::from(v) * n).div_floor(d);
    }
    for &v in cfg.b_list() {
        total -= (BigInt::from(v) * n).div_floor(d);
    }
    total
        .to_i64()
        .ok_or_else(|| Error::Integrity("G value out of range".into()))
}

/// `G(num / den)` in machine integers; `None` when a product overflows.
pub(crate) fn g_floor_scaled(cfg: &RatioConfig, num: u128, den: u128) -> Option<i64> {
    let mut total: i128 = 0;
    if let (Ok(n64), Ok(d64)) = (u64::try_from(num), u64::try_from(den)) {
        // common case: every product fits in u64
        let fits = cfg
            .a1()
            .checked_mul(num)
            .is_some_and(|m| m <= u64::MAX as u128);
        if fits {
            for &v in cfg.a_list() {
                total += ((v as u64 * n64) / d64) as i128;
            }
            for &v in cfg.b_list() {
                total -= ((v as u64 * n64) / d64) as i128;
            }
            return i64::try_from(total).ok();
        }
    }
    for &v in cfg.a_list() {
        total += (v.checked_mul(num)? / den) as i128;
    }
    for &v in cfg.b_list() {
        total -= (v.checked_mul(num)? / den) as i128;
    }
    i64::try_from(total).ok()
}

/// `#{1 ≤ u ≤ n : gcd(u, ∏ primes) = 1}` by Legendre's recursion.
pub(crate) fn coprime_count(n: u128, primes: &[u64]) -> u128 {
    match primes.split_last() {
        None => n,
        Some(_) if n == 0 => 0,
        Some((&p, rest)) => coprime_count(n, rest) - coprime_count(n / p as u128, rest),
    }
}

/// `G(x)` for the compiled `(k, P)` configuration via coprime counting:
/// `Φ(⌊(k+1)Qx⌋) − Φ(⌊kQx⌋) − Φ(⌊Qx⌋)` after reducing `x` modulo 1.
pub fn g_indicator(k: u64, p: &PrimeSet, x: &Rational) -> Result<i64> {
    if x.is_negative() {
        return Err(Error::Domain("G is evaluated for x ≥ 0".into()));
    }
    let frac = x.fract();
    let q = BigInt::from(p.q().clone());
    let (n, d) = (frac.numer(), frac.denom());
    let scaled = |mult: u64| -> Result<u128> {
        (BigInt::from(mult) * &q * n)
            .div_floor(d)
            .to_u128()
            .ok_or_else(|| Error::Budget("indicator argument exceeds 128 bits".into()))
    };
    let primes = p.primes();
    let top = coprime_count(scaled(k + 1)?, primes) as i128;
    let mid = coprime_count(scaled(k)?, primes) as i128;
    let low = coprime_count(scaled(1)?, primes) as i128;
    i64::try_from(top - mid - low).map_err(|_| Error::Integrity("G value out of range".into()))
}

/// `2^{#P − 1}`, the bound on `|G|` for compiled prime-set configurations.
pub fn max_abs_bound(p: &PrimeSet) -> BigUint {
    BigUint::from(1u32) << (p.len().saturating_sub(1))
}

/// `G` on the grid `j / L`, `0 ≤ j < L`, for small general configurations.
pub fn period_profile(cfg: &RatioConfig, max_points: u64) -> Result<Vec<GPoint>> {
    let l = cfg
        .lcm()
        .to_u64()
        .filter(|&l| l <= max_points)
        .ok_or_else(|| Error::Budget(format!("period grid L = {} too large", cfg.lcm())))?;
    (0..l)
        .map(|j| {
            let x = Rational::new(j, l)?;
            Ok(GPoint {
                value: g_floor(cfg, &x)?,
                x,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;
    use crate::ratioconfig::{compile_prime_set, preset};

    fn ps(v: &[u64]) -> PrimeSet {
        PrimeSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn erdos_values() {
        let e = preset("erdos").unwrap();
        assert_eq!(g_floor(&e, &rational(1, 2).unwrap()).unwrap(), 1);
        assert_eq!(g_floor(&e, &rational(3, 2).unwrap()).unwrap(), 1);
        // nothing in [1, 3/2) reaches 1
        for j in 0..50 {
            let x = Rational::from(1) + rational(j, 100).unwrap();
            assert!(g_floor(&e, &x).unwrap() < 1);
        }
        assert_eq!(g_floor(&e, &rational(1, 3).unwrap()).unwrap(), 0);
    }

    #[test]
    fn indicator_examples() {
        let p = ps(&[2, 3, 5]);
        assert_eq!(g_indicator(5, &p, &rational(13, 180).unwrap()).unwrap(), 1);
        assert_eq!(g_indicator(5, &p, &rational(49, 180).unwrap()).unwrap(), 2);
        assert_eq!(g_indicator(5, &p, &rational(1, 360).unwrap()).unwrap(), 0);
    }

    #[test]
    fn floor_and_indicator_agree_on_grid() {
        let p = ps(&[2, 3, 5]);
        let cfg = compile_prime_set(5, &p).unwrap();
        for j in 0..=1000 {
            let x = rational(j, 997).unwrap();
            assert_eq!(g_floor(&cfg, &x).unwrap(), g_indicator(5, &p, &x).unwrap(), "x = {x}");
        }
    }

    #[test]
    fn big_path_matches_fast_path() {
        let cfg = compile_prime_set(5, &ps(&[2, 3, 5, 13])).unwrap();
        let x = rational(1309, 2340).unwrap();
        let fast = g_floor(&cfg, &x).unwrap();
        let shifted = &x + &Rational::from_integer(BigInt::from(10).pow(30));
        assert_eq!(g_floor(&cfg, &shifted).unwrap(), fast);
    }

    #[test]
    fn abs_bound() {
        assert_eq!(max_abs_bound(&ps(&[2])), BigUint::from(1u32));
        assert_eq!(max_abs_bound(&ps(&[2, 3, 5])), BigUint::from(4u32));
        assert_eq!(
            max_abs_bound(&ps(&[2, 3, 5, 7, 11, 13, 31, 43, 61, 71, 83])),
            BigUint::from(1024u32)
        );
    }

    #[test]
    fn coprime_counting() {
        let primes = [2u64, 3, 5];
        for n in 0..200u128 {
            let brute = (1..=n).filter(|u| primes.iter().all(|&p| u % p as u128 != 0)).count();
            assert_eq!(coprime_count(n, &primes), brute as u128);
        }
    }

    #[test]
    fn profile_of_erdos() {
        let pts = period_profile(&preset("erdos").unwrap(), 100).unwrap();
        assert_eq!(pts.iter().map(|p| p.value).collect::<Vec<_>>(), vec![0, 1]);
    }
}
