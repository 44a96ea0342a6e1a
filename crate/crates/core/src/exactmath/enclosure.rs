use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::{Error, Result};

/// Closed interval `[lo, hi]` with exact rational endpoints.
///
/// Every operation returns an interval containing the exact real result for
/// every choice of points in the operands.
#[derive(Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

/// Which binary operation [`enclosure_arith`] applies.
#[derive(Clone, Debug)]
pub enum EnclosureOp {
    Add,
    Sub,
    /// Multiply the first operand by an exact rational; the second is ignored.
    MulByRational(Rational),
    /// Full interval product of both operands.
    Scale,
}

pub fn enclosure_arith(a: &Enclosure, b: &Enclosure, op: EnclosureOp) -> Enclosure {
    match op {
        EnclosureOp::Add => a.add(b),
        EnclosureOp::Sub => a.sub(b),
        EnclosureOp::MulByRational(q) => a.mul_rational(&q),
        EnclosureOp::Scale => a.mul(b),
    }
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Construction(format!("empty enclosure [{lo}, {hi}]")));
        }
        Ok(Enclosure { lo, hi })
    }

    pub fn point(q: Rational) -> Self {
        Enclosure { lo: q.clone(), hi: q }
    }

    pub fn zero() -> Self {
        Enclosure::point(Rational::zero())
    }

    /// `[lo, hi] / 2^shift`.
    pub(crate) fn from_dyadic(lo: BigInt, hi: BigInt, shift: u64) -> Self {
        debug_assert!(lo <= hi);
        Enclosure {
            lo: Rational::dyadic(lo, shift),
            hi: Rational::dyadic(hi, shift),
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certainly strictly greater than `other`.
    pub fn gt(&self, other: &Enclosure) -> bool {
        self.lo > other.hi
    }

    /// Certainly strictly less than `other`.
    pub fn lt(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add_rational(&self, q: &Rational) -> Enclosure {
        Enclosure {
            lo: &self.lo + q,
            hi: &self.hi + q,
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Enclosure {
        let a = &self.lo * q;
        let b = &self.hi * q;
        if a <= b {
            Enclosure { lo: a, hi: b }
        } else {
            Enclosure { lo: b, hi: a }
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().cloned().unwrap_or_else(Rational::zero);
        let hi = cands.iter().max().cloned().unwrap_or_else(Rational::zero);
        Enclosure { lo, hi }
    }

    /// Division by an enclosure that excludes zero.
    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        if other.contains(&Rational::zero()) {
            return Err(Error::Domain("division by an enclosure containing 0".into()));
        }
        let inv = Enclosure {
            lo: other.hi.recip()?,
            hi: other.lo.recip()?,
        };
        Ok(self.mul(&inv))
    }

    /// Intersection, if nonempty.
    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    /// Outward-rounded decimal endpoints.
    pub fn to_decimals(&self, digits: u32) -> DecimalInterval {
        DecimalInterval {
            lo: self.lo.to_decimal_floor(digits),
            hi: self.hi.to_decimal_ceil(digits),
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / Rational::from_integer(2)).to_f64()
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.to_decimals(6);
        write!(f, "[{}, {}]", d.lo, d.hi)
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// Decimal strings of an outward-rounded interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalInterval {
    pub lo: String,
    pub hi: String,
}

impl DecimalInterval {
    pub fn to_enclosure(&self) -> Result<Enclosure> {
        Enclosure::new(
            Rational::from_decimal_str(&self.lo)?,
            Rational::from_decimal_str(&self.hi)?,
        )
    }
}

/// Largest integer `r` with `r^2 <= n`.
pub(crate) fn isqrt(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    n.sqrt()
}

/// Enclosure of `√q` with dyadic endpoints of denominator `2^bits`.
pub fn sqrt_enclosure(q: &Rational, bits: u64) -> Result<Enclosure> {
    if q.is_negative() {
        return Err(Error::Domain(format!("square root of negative {q}")));
    }
    // floor(sqrt(q * 4^bits)) <= 2^bits sqrt(q) < that + 1
    let scaled = q.floor_dyadic(2 * bits);
    let r = isqrt(&scaled);
    let exact = Rational::dyadic(&r * &r, 2 * bits) == *q;
    let hi = if exact { r.clone() } else { &r + 1 };
    Ok(Enclosure::from_dyadic(r, hi, bits))
}
