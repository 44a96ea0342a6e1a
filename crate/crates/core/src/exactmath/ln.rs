//! Certified natural logarithms of positive rationals.
//!
//! `ln q = e ln 2 + 2 atanh(z)` where `q = 2^e r`, `r ∈ [2/3, 4/3]` and
//! `z = (r − 1)/(r + 1)`, so `|z| ≤ 1/5`. The atanh series is summed in
//! fixed point with separate floor/ceil tracks and closed with the geometric
//! remainder bound `|z|^(2N+1) / ((2N+1)(1 − z²))`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Enclosure, Rational};
use crate::{Error, Result};

/// Upper limit on fixed-point bits before giving up.
pub const MAX_LN_BITS: u64 = 1 << 16;

const GUARD_BITS: u64 = 24;

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Floor/ceil fixed-point bounds of `atanh(a/b)` scaled by `2^bits`, for
/// `0 ≤ a/b ≤ 1/3`.
fn atanh_fixed(a: &BigInt, b: &BigInt, bits: u64) -> (BigInt, BigInt) {
    if a.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let a2 = a * a;
    let b2 = b * b;
    let scaled = a << bits;
    let mut p_lo = scaled.div_floor(b);
    let mut p_hi = ceil_div(&scaled, b);
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut j: u64 = 0;
    loop {
        let denom = BigInt::from(2 * j + 1);
        if p_hi <= BigInt::one() {
            // remainder: p_hi / ((2j+1)(1 - z^2)) = p_hi b^2 / ((2j+1)(b^2 - a^2))
            let rem = ceil_div(&(&p_hi * &b2), &(&denom * (&b2 - &a2)));
            sum_hi += rem;
            break;
        }
        sum_lo += p_lo.div_floor(&denom);
        sum_hi += ceil_div(&p_hi, &denom);
        p_lo = (&p_lo * &a2).div_floor(&b2);
        p_hi = ceil_div(&(&p_hi * &a2), &b2);
        j += 1;
    }
    (sum_lo, sum_hi)
}

/// Bounds of `ln 2 · 2^bits`.
fn ln2_fixed(bits: u64) -> (BigInt, BigInt) {
    let (lo, hi) = atanh_fixed(&BigInt::one(), &BigInt::from(3), bits);
    (lo << 1, hi << 1)
}

fn bit_length(n: &BigInt) -> i64 {
    n.bits() as i64
}

/// Enclosure of `ln q` with dyadic endpoints of denominator `2^bits`.
///
/// The width is at most about `(|e| + 64) · 2^-bits` where `e ≈ log2 q`.
pub fn ln_at_bits(q: &Rational, bits: u64) -> Result<Enclosure> {
    let (lo, hi) = ln_dyadic(q, bits)?;
    Ok(Enclosure::from_dyadic(lo, hi, bits))
}

/// Numerators `(lo, hi)` over `2^bits` bracketing `ln q`.
pub(crate) fn ln_dyadic(q: &Rational, bits: u64) -> Result<(BigInt, BigInt)> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("logarithm of non-positive {q}")));
    }
    if *q == Rational::one() {
        return Ok((BigInt::zero(), BigInt::zero()));
    }
    let (n, d) = (q.numer().clone(), q.denom().clone());
    // q = 2^e * (rn / rd) with the ratio in [2/3, 4/3]
    let mut e = bit_length(&n) - bit_length(&d);
    let (mut rn, mut rd) = if e >= 0 {
        (n, d << e as u64)
    } else {
        (n << (-e) as u64, d)
    };
    if BigInt::from(3) * &rn > BigInt::from(4) * &rd {
        rd <<= 1;
        e += 1;
    } else if BigInt::from(3) * &rn < BigInt::from(2) * &rd {
        rn <<= 1;
        e -= 1;
    }
    let work = bits + GUARD_BITS + (64 - (e.unsigned_abs() + 1).leading_zeros() as u64);

    let num = &rn - &rd;
    let den = &rn + &rd;
    let (at_lo, at_hi) = atanh_fixed(&num.abs(), &den, work);
    let (at_lo, at_hi) = match num.sign() {
        Sign::Minus => (-at_hi, -at_lo),
        _ => (at_lo, at_hi),
    };
    let (mut lo, mut hi) = (at_lo << 1, at_hi << 1);
    if e != 0 {
        let (l2_lo, l2_hi) = ln2_fixed(work);
        let eb = BigInt::from(e);
        if e > 0 {
            lo += &eb * l2_lo;
            hi += &eb * l2_hi;
        } else {
            lo += &eb * l2_hi;
            hi += &eb * l2_lo;
        }
    }
    let shift = work - bits;
    let lo = lo >> shift; // arithmetic shift floors
    let hi = ceil_div(&hi, &(BigInt::one() << shift));
    Ok((lo, hi))
}

/// Fixed-point bits so that an absolute error near `2^-bits` meets `width`.
pub(crate) fn bits_for_width(width: &Rational) -> u64 {
    // 2^-bits <= width / 2^8
    let inv = width.recip().map(|r| r.ceil()).unwrap_or_else(|_| BigInt::one());
    inv.bits() + 8
}

/// Enclosure of `ln q` of width at most `width_target`.
pub fn ln_enclosure(q: &Rational, width_target: &Rational) -> Result<Enclosure> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("logarithm of non-positive {q}")));
    }
    if !width_target.is_positive() {
        return Err(Error::Domain("width target must be positive".into()));
    }
    let mut bits = bits_for_width(width_target).max(32);
    loop {
        if bits > MAX_LN_BITS {
            return Err(Error::Budget(format!(
                "ln({q}) could not reach width {width_target} within {MAX_LN_BITS} bits"
            )));
        }
        let enc = ln_at_bits(q, bits)?;
        if enc.width() <= *width_target {
            return Ok(enc);
        }
        bits *= 2;
    }
}

/// Convenience: `ln n` for a positive integer.
pub fn ln_int_at_bits(n: u64, bits: u64) -> Result<Enclosure> {
    ln_at_bits(&Rational::from_integer(n), bits)
}
