//! Explicit lower bounds on the number of primes in `(b_1 n, a_1 n]`.
//!
//! With `M_C`, `M_S` the level counts used for the constant and the
//! small-prime terms,
//!
//! ```text
//! N(n) ≥ [ n(Λ − c ln β) + (s − t) − ln ∏ b_j − t ln n − M_C ln C
//!          − (M_S/3) √(a_1 n) ln(a_1 n) ] / ln(a_1 n)
//! ```
//!
//! valid once `√(a_1 n) ≥ 36`. An exhaustive sweep gives
//! `M_C = M_S = M`. Otherwise `M_S = 2^{#P−1}`, and `M_C` is the found
//! count when `C ≤ 1` (more levels only shrink `C^M`) and `2^{#P−1}` when
//! `C > 1`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{c_upper_bound, m_cap, PrimorialBound};
use crate::exactmath::{ln_at_bits, sqrt_enclosure, Enclosure, Rational};
use crate::gsweep::SweepReport;
use crate::ratioconfig::{weight_closed_form_at_bits, weight_direct_with_width, RatioConfig};
use crate::{Error, Result};

/// Largest `n` the threshold search will consider.
pub const MAX_EFFECTIVE_N: u64 = 1 << 62;

/// Longest stretch checked point by point near the minimum.
const MAX_POINTWISE: u64 = 1_000_000;

/// Bits of the over-approximated root in [`nk_lower_bound`].
const ROOT_BITS: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveBound {
    pub config_id: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub n0: u64,
    pub validity_floor: u64,
}

/// Least `n` with `a_1 n ≥ 1296`.
pub fn validity_floor(cfg: &RatioConfig) -> u64 {
    (1296u128.div_ceil(cfg.a1())).max(1) as u64
}

/// Pieces of the bound that do not depend on `n`.
struct Chain {
    a1: u128,
    t: u64,
    /// `Λ − c ln β`
    slope: Enclosure,
    /// `(s − t) − ln ∏ b_j − M_C ln C`
    constant: Enclosure,
    m_sq: Rational,
    bits: u64,
}

impl Chain {
    fn new(cfg: &RatioConfig, report: &SweepReport, bound: &PrimorialBound) -> Result<Chain> {
        if report.config_id != cfg.config_id() {
            return Err(Error::Integrity("sweep report belongs to another configuration".into()));
        }
        let found = Rational::from(report.m_found as u64);
        let (c, m_c, m_sq) = match (report.exhaustive, cfg.prime_set()) {
            (true, _) => (report.c_found.clone(), found.clone(), found),
            (false, Some(p)) => {
                let c = c_upper_bound(p, report.scale, &report.thresholds, report.scan_limit_d, false)?;
                let cap = Rational::from(m_cap(p));
                let m_c = if bound.c <= Rational::one() { found } else { cap.clone() };
                (c, m_c, cap)
            }
            (false, None) => {
                return Err(Error::Domain(
                    "a bounded sweep of a general configuration has no level cap".into(),
                ))
            }
        };
        let bits = 128 + c.ceil().bits() + BigInt::from(cfg.b_product()).bits();
        let lambda = match cfg.prime_set() {
            Some(p) => weight_closed_form_at_bits(cfg.k(), p, bits)?.value,
            None => weight_direct_with_width(cfg, &Rational::dyadic(BigInt::from(1), bits))?.value,
        };
        let slope = lambda.sub(&ln_at_bits(&bound.beta, bits)?.mul_rational(&c));
        let st = Rational::from(cfg.s() as i64 - cfg.t() as i64);
        let constant = ln_at_bits(&Rational::from(cfg.b_product()), bits)?
            .add(&ln_at_bits(&bound.c, bits)?.mul_rational(&m_c))
            .neg()
            .add_rational(&st);
        Ok(Chain {
            a1: cfg.a1(),
            t: cfg.t() as u64,
            slope,
            constant,
            m_sq,
            bits,
        })
    }

    fn bits_for(&self, n: u64) -> u64 {
        self.bits + 2 * (64 - n.leading_zeros() as u64)
    }

    /// Numerator of the bound with `root` standing in for `√(a_1 n)`.
    fn numerator(&self, n: u64, root: &Rational) -> Result<(Enclosure, Enclosure)> {
        let bits = self.bits_for(n);
        let an = Rational::from(self.a1) * Rational::from(n);
        let ln_an = ln_at_bits(&an, bits)?;
        let ln_n = ln_at_bits(&Rational::from(n), bits)?;
        let third = &self.m_sq * &Rational::new(1, 3)?;
        let num = self
            .slope
            .mul_rational(&Rational::from(n))
            .add(&self.constant)
            .sub(&ln_n.mul_rational(&Rational::from(self.t)))
            .sub(&ln_an.mul_rational(&(third * root.clone())));
        Ok((num, ln_an))
    }

    /// Convex minorant of `numerator − N ln(a_1 n)`.
    fn slack(&self, n: u64, target: u64) -> Result<Enclosure> {
        let an = Rational::from(self.a1) * Rational::from(n);
        // √ plus 2^-15 dominates the 2^-16 ceiling used by nk_lower_bound
        let root = sqrt_enclosure(&an, 64)?.hi().clone() + Rational::dyadic(BigInt::from(1), 15);
        let (num, ln_an) = self.numerator(n, &root)?;
        Ok(num.sub(&ln_an.mul_rational(&Rational::from(target))))
    }
}

/// Lower endpoint of the explicit bound on `#{p prime : b_1 n < p ≤ a_1 n}`.
pub fn nk_lower_bound(cfg: &RatioConfig, report: &SweepReport, bound: &PrimorialBound, n: u64) -> Result<Rational> {
    let floor = validity_floor(cfg);
    if n < floor {
        return Err(Error::Domain(format!(
            "n = {n} is below the validity floor {floor} (need √(a_1 n) ≥ 36)"
        )));
    }
    let chain = Chain::new(cfg, report, bound)?;
    let an = Rational::from(cfg.a1()) * Rational::from(n);
    let root = sqrt_enclosure(&an, ROOT_BITS)?.hi().clone();
    let (num, ln_an) = chain.numerator(n, &root)?;
    Ok(num.div(&ln_an)?.lo().clone())
}

/// Least `n0` for which the certified bound stays `≥ target` for all
/// `n ≥ n0`.
///
/// The slack `g(n) = numerator − target · ln(a_1 n)` is convex in `n`.
/// Once a step `g(m) ≤ g(m+1)` is certified, `g` is nondecreasing on
/// `[m, ∞)`; once a step `g(j+1) ≤ g(j)` is certified, `g` is nonincreasing
/// on `[floor, j+1]`. The two facts bound the finitely many points that need
/// individual evaluation.
pub fn effective_threshold(cfg: &RatioConfig, report: &SweepReport, bound: &PrimorialBound, target: u64) -> Result<EffectiveBound> {
    let floor = validity_floor(cfg);
    let chain = Chain::new(cfg, report, bound)?;
    if !chain.slope.lo().is_positive() {
        return Err(Error::NoThreshold(format!(
            "Λ − c ln β = {} is not certified positive",
            chain.slope
        )));
    }
    let done = |n0| EffectiveBound {
        config_id: cfg.config_id(),
        n: target,
        n0,
        validity_floor: floor,
    };
    if target == 0 {
        return Ok(done(floor));
    }
    let g = |n: u64| chain.slack(n, target);
    let rising = |n: u64| -> Result<bool> { Ok(g(n + 1)?.lo() >= g(n)?.hi()) };
    let falling = |n: u64| -> Result<bool> { Ok(g(n + 1)?.hi() <= g(n)?.lo()) };
    let nonneg = |n: u64| -> Result<bool> { Ok(!g(n)?.lo().is_negative()) };

    let m = least_from(floor, &rising)?;
    let n_pos = least_from(m, &nonneg)?;
    if n_pos > m {
        return Ok(done(n_pos));
    }
    let mut n = m;
    for _ in 0..MAX_POINTWISE {
        if n == floor {
            return Ok(done(floor));
        }
        let prev = n - 1;
        if !nonneg(prev)? {
            return Ok(done(n));
        }
        if falling(prev)? {
            return Ok(done(floor));
        }
        n = prev;
    }
    Err(Error::Budget(format!(
        "no certified descent within {MAX_POINTWISE} points below n = {m}"
    )))
}

/// Least `n ≥ start` with `pred(n)`, for a predicate that stays true once
/// true.
fn least_from(start: u64, pred: &dyn Fn(u64) -> Result<bool>) -> Result<u64> {
    if pred(start)? {
        return Ok(start);
    }
    let mut lo = start; // pred(lo) is false
    let mut step = 1u64;
    let hi = loop {
        let probe = lo
            .checked_add(step)
            .filter(|&p| p <= MAX_EFFECTIVE_N)
            .ok_or_else(|| Error::Budget(format!("no threshold below {MAX_EFFECTIVE_N}")))?;
        if pred(probe)? {
            break probe;
        }
        lo = probe;
        step *= 2;
    };
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
