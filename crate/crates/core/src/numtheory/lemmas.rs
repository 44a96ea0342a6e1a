//! Executable checks of the elementary lemmas the certification relies on:
//! `π(x) ≤ x/3` for `x ≥ 36`, primorial bounds `Θ(x) ≤ C β^x`, the weak
//! Stirling bracket, and Legendre's formula.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{legendre_nu, sieve_primes};
use crate::exactmath::{ln_dyadic, Rational};
use crate::{Error, Result};

/// Fixed-point bits for the running log sums.
const SUM_BITS: u64 = 64;

/// Below this the primorial is also compared as an exact integer product.
pub const EXACT_PRIMORIAL_LIMIT: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiBoundReport {
    pub x_max: u64,
    /// Plateau starts examined (36 and every prime in range).
    pub points_checked: u64,
    pub first_violation: Option<u64>,
    pub passed: bool,
}

/// Checks `3 π(x) ≤ x` for every integer `36 ≤ x ≤ x_max`.
///
/// `π` is constant between consecutive primes, so the binding points are
/// `x = 36` and every prime `p > 36`.
pub fn check_pi_bound(x_max: u64) -> Result<PiBoundReport> {
    if x_max < 36 {
        return Err(Error::Domain("x_max must be at least 36".into()));
    }
    let primes = sieve_primes(x_max)?;
    let mut first_violation = None;
    let mut points = 0u64;
    let mut pi = 0u64;
    let mut checked_36 = false;
    for &p in &primes {
        let p = p as u64;
        if p > 36 && !checked_36 {
            points += 1;
            checked_36 = true;
            if 3 * pi > 36 {
                first_violation = Some(36);
                break;
            }
        }
        pi += 1;
        if p >= 36 {
            points += 1;
            if 3 * pi > p {
                first_violation = Some(p);
                break;
            }
        }
    }
    if !checked_36 && first_violation.is_none() {
        points += 1;
        if 3 * pi > 36 {
            first_violation = Some(36);
        }
    }
    Ok(PiBoundReport {
        x_max,
        points_checked: points,
        passed: first_violation.is_none(),
        first_violation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginCheckpoint {
    pub x: u64,
    /// Lower bound of `ln C + x ln β − ln Θ(x)`, rounded down.
    pub margin_lo: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimorialReport {
    pub x_max: u64,
    pub constant: Rational,
    pub base: Rational,
    pub exact_checked_up_to: u64,
    /// Integers where `Θ(x) = C β^x` holds exactly.
    pub equality_points: Vec<u64>,
    pub first_violation: Option<u64>,
    pub checkpoints: Vec<MarginCheckpoint>,
    pub passed: bool,
}

/// Checks `Θ(x) ≤ C β^x` for all integers `2 ≤ x ≤ x_max`.
///
/// Up to [`EXACT_PRIMORIAL_LIMIT`] the comparison is done on exact integers;
/// over the whole range it is also done in log space with enclosures, and
/// the two paths must agree.
pub fn check_primorial_bound(x_max: u64, constant: &Rational, base: &Rational) -> Result<PrimorialReport> {
    if x_max < 2 {
        return Err(Error::Domain("x_max must be at least 2".into()));
    }
    if !constant.is_positive() || !base.is_positive() {
        return Err(Error::Domain("C and β must be positive".into()));
    }
    let primes = sieve_primes(x_max)?;

    // Exact path: Θ(x) · C_den · β_den^x ≤ C_num · β_num^x.
    let exact_to = x_max.min(EXACT_PRIMORIAL_LIMIT);
    let mut equality_points = Vec::new();
    let mut exact_violation = None;
    {
        let (cn, cd) = (constant.numer(), constant.denom());
        let (bn, bd) = (base.numer(), base.denom());
        let mut theta = BigInt::one();
        let mut bn_pow = BigInt::one();
        let mut bd_pow = BigInt::one();
        let mut next_prime = primes.iter().map(|&p| p as u64).peekable();
        for x in 1..=exact_to {
            bn_pow *= bn;
            bd_pow *= bd;
            if next_prime.peek() == Some(&x) {
                theta *= x;
                next_prime.next();
            }
            if x < 2 {
                continue;
            }
            let lhs = &theta * cd * &bd_pow;
            let rhs = cn * &bn_pow;
            if lhs > rhs {
                exact_violation = Some(x);
                break;
            } else if lhs == rhs {
                equality_points.push(x);
            }
        }
    }

    // Log path. Θ is constant between primes, so when β ≥ 1 the binding
    // points are the primes; powers of two are visited for the checkpoints.
    let ln_c = ln_dyadic(constant, SUM_BITS)?;
    let ln_b = ln_dyadic(base, SUM_BITS)?;
    let points: Vec<u64> = if *base >= Rational::one() {
        let mut pts: Vec<u64> = primes.iter().map(|&p| p as u64).collect();
        pts.extend(std::iter::successors(Some(2u64), |&x| x.checked_mul(2)).take_while(|&x| x <= x_max));
        pts.sort_unstable();
        pts.dedup();
        pts
    } else {
        (2..=x_max).collect()
    };
    let mut sum_lo = BigInt::from(0);
    let mut sum_hi = BigInt::from(0);
    let mut log_violation = None;
    let mut checkpoints = Vec::new();
    let mut pidx = 0usize;
    for x in points {
        if exact_violation.is_some() && x > exact_to {
            break;
        }
        while pidx < primes.len() && primes[pidx] as u64 <= x {
            let (lo, hi) = ln_dyadic(&Rational::from_integer(primes[pidx] as u64), SUM_BITS)?;
            sum_lo += lo;
            sum_hi += hi;
            pidx += 1;
        }
        let xb = BigInt::from(x);
        let m_lo = &ln_c.0 + &xb * &ln_b.0 - &sum_hi;
        let m_hi = &ln_c.1 + &xb * &ln_b.1 - &sum_lo;
        if x.is_power_of_two() {
            checkpoints.push(MarginCheckpoint {
                x,
                margin_lo: Rational::dyadic(m_lo.clone(), SUM_BITS).to_decimal_floor(6),
            });
        }
        if m_hi < BigInt::from(0) {
            log_violation = Some(x);
            break;
        }
        if m_lo < BigInt::from(0) && x > exact_to {
            return Err(Error::Budget(format!(
                "primorial bound undecided at x = {x} with {SUM_BITS}-bit enclosures"
            )));
        }
    }

    if let (Some(lv), None) = (log_violation, exact_violation) {
        if lv <= exact_to {
            return Err(Error::Integrity(format!(
                "log-space path reports a violation at {lv} that the exact path does not"
            )));
        }
    }
    let first_violation = match (exact_violation, log_violation) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Ok(PrimorialReport {
        x_max,
        constant: constant.clone(),
        base: base.clone(),
        exact_checked_up_to: exact_to,
        equality_points,
        passed: first_violation.is_none(),
        first_violation,
        checkpoints,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StirlingReport {
    pub n_max: u64,
    pub equality_points: Vec<u64>,
    pub first_violation: Option<u64>,
    pub passed: bool,
}

/// Checks `n ln n − n + 1 ≤ ln n! ≤ (n+1) ln n − n + 1` for `1 ≤ n ≤ n_max`,
/// recording where either side is an exact equality.
pub fn check_stirling(n_max: u64) -> Result<StirlingReport> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut bits = SUM_BITS;
    'retry: loop {
        let one = BigInt::one() << bits;
        let mut fact_lo = BigInt::from(0);
        let mut fact_hi = BigInt::from(0);
        let mut equality_points = Vec::new();
        for n in 1..=n_max {
            let (l_lo, l_hi) = ln_dyadic(&Rational::from_integer(n), bits)?;
            fact_lo += &l_lo;
            fact_hi += &l_hi;
            let nb = BigInt::from(n);
            let shift = &one * (&nb - 1u32);
            // lower side: n ln n − (n − 1)
            let low_lo = &nb * &l_lo - &shift;
            let low_hi = &nb * &l_hi - &shift;
            // upper side: (n + 1) ln n − (n − 1)
            let up_lo = (&nb + 1u32) * &l_lo - &shift;
            let up_hi = (&nb + 1u32) * &l_hi - &shift;

            let exact = l_lo == l_hi && fact_lo == fact_hi;
            if exact {
                let low_eq = low_lo == fact_lo;
                let up_eq = up_lo == fact_lo;
                if low_eq || up_eq {
                    equality_points.push(n);
                }
                if low_lo > fact_lo || up_lo < fact_lo {
                    return Ok(StirlingReport {
                        n_max,
                        equality_points,
                        first_violation: Some(n),
                        passed: false,
                    });
                }
                continue;
            }
            if low_lo > fact_hi || up_hi < fact_lo {
                return Ok(StirlingReport {
                    n_max,
                    equality_points,
                    first_violation: Some(n),
                    passed: false,
                });
            }
            let strict = low_hi < fact_lo && fact_hi < up_lo;
            if !strict {
                bits *= 2;
                if bits > crate::exactmath::MAX_LN_BITS {
                    return Err(Error::Budget(format!("Stirling bracket undecided at n = {n}")));
                }
                continue 'retry;
            }
        }
        return Ok(StirlingReport {
            n_max,
            passed: true,
            equality_points,
            first_violation: None,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreReport {
    pub n_max: u64,
    pub p_max: u64,
    pub pairs_checked: u64,
    pub first_mismatch: Option<(u64, u64)>,
    pub passed: bool,
}

/// Compares `legendre_nu(p, n)` with the exponent of `p` accumulated by
/// factoring each of `1, 2, …, n` directly.
pub fn check_legendre(n_max: u64, p_max: u64) -> Result<LegendreReport> {
    let primes = sieve_primes(p_max)?;
    let mut pairs = 0u64;
    for &p in &primes {
        let p = p as u64;
        let mut brute = 0u64;
        for n in 0..=n_max {
            if n > 0 {
                let mut m = n;
                while m % p == 0 {
                    brute += 1;
                    m /= p;
                }
            }
            pairs += 1;
            if legendre_nu(p, n)? != brute {
                return Ok(LegendreReport {
                    n_max,
                    p_max,
                    pairs_checked: pairs,
                    first_mismatch: Some((p, n)),
                    passed: false,
                });
            }
        }
    }
    Ok(LegendreReport {
        n_max,
        p_max,
        pairs_checked: pairs,
        first_mismatch: None,
        passed: true,
    })
}
