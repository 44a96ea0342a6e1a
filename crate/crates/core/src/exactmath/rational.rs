use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Exact fraction in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

/// Builds `num / den`, reduced.
pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
    Rational::new(num, den)
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Construction("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `num / 2^shift`.
    pub fn dyadic(num: BigInt, shift: u64) -> Self {
        Rational(BigRational::new(num, BigInt::one() << shift))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    pub fn fract(&self) -> Self {
        self - &Rational::from_integer(self.floor())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Largest dyadic `m / 2^bits` not exceeding `self`.
    pub fn floor_dyadic(&self, bits: u64) -> BigInt {
        (self.0.numer() << bits).div_floor(self.0.denom())
    }

    /// Smallest dyadic `m / 2^bits` not below `self`.
    pub fn ceil_dyadic(&self, bits: u64) -> BigInt {
        -((-(self.0.numer() << bits)).div_floor(self.0.denom()))
    }

    /// Decimal with `digits` fractional digits, rounded toward −∞.
    pub fn to_decimal_floor(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = (self.0.numer() * &scale).div_floor(self.0.denom());
        format_scaled(&scaled, digits)
    }

    /// Decimal with `digits` fractional digits, rounded toward +∞.
    pub fn to_decimal_ceil(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = -((-(self.0.numer() * &scale)).div_floor(self.0.denom()));
        format_scaled(&scaled, digits)
    }

    /// Parses a plain decimal literal such as `-12.5` exactly.
    pub fn from_decimal_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("bad decimal literal {s:?}"));
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        let digits: String = format!("{int_part}{frac_part}");
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let mut num: BigInt = digits.parse().map_err(|_| err())?;
        if neg {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Rational::new(num, den)
    }

    /// Lossy conversion for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

fn format_scaled(scaled: &BigInt, digits: u32) -> String {
    let neg = scaled.sign() == Sign::Minus;
    let mag = scaled.magnitude().to_string();
    let digits = digits as usize;
    let body = if digits == 0 {
        mag
    } else {
        let padded = format!("{mag:0>width$}", width = digits + 1);
        let (i, f) = padded.split_at(padded.len() - digits);
        format!("{i}.{f}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q`, an integer, or a decimal literal.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            return Rational::new(p, q);
        }
        Rational::from_decimal_str(s)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(n: $t) -> Self {
                Rational::from_integer(n)
            }
        }
    )*};
}

from_prim!(i32, i64, u32, u64, u128);

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigUint> for Rational {
    fn from(n: BigUint) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer((*other).into())
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer((*other).into()))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
// Division by zero panics like the integer operators; use `recip` for a checked path.
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces() {
        let r = rational(6, 4).unwrap();
        assert_eq!(r.to_string(), "3/2");
        let z = rational(0, 7).unwrap();
        assert_eq!(z.numer(), &BigInt::zero());
        assert_eq!(z.denom(), &BigInt::one());
        let n = rational(3, -6).unwrap();
        assert_eq!(n.to_string(), "-1/2");
    }

    #[test]
    fn already_reduced() {
        // 637 = 7^2 * 13 and 11160 = 2^3 * 3^2 * 5 * 31
        let r = rational(11160, 637).unwrap();
        assert_eq!(r.numer(), &BigInt::from(11160));
        assert_eq!(r.denom(), &BigInt::from(637));
    }

    #[test]
    fn zero_denominator() {
        assert!(matches!(rational(1, 0), Err(Error::Construction(_))));
    }

    #[test]
    fn floor_ceil() {
        let r = rational(-7, 2).unwrap();
        assert_eq!(r.floor(), BigInt::from(-4));
        assert_eq!(r.ceil(), BigInt::from(-3));
        assert_eq!(r.fract(), rational(1, 2).unwrap());
    }

    #[test]
    fn decimals_round_outward() {
        let third = rational(1, 3).unwrap();
        assert_eq!(third.to_decimal_floor(3), "0.333");
        assert_eq!(third.to_decimal_ceil(3), "0.334");
        let neg = -third;
        assert_eq!(neg.to_decimal_floor(3), "-0.334");
        assert_eq!(neg.to_decimal_ceil(3), "-0.333");
        assert_eq!(rational(5, 1).unwrap().to_decimal_floor(2), "5.00");
        assert_eq!(rational(1, 200).unwrap().to_decimal_ceil(2), "0.01");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("17/5".parse::<Rational>().unwrap(), rational(17, 5).unwrap());
        assert_eq!("3.4".parse::<Rational>().unwrap(), rational(17, 5).unwrap());
        assert_eq!("-2".parse::<Rational>().unwrap(), rational(-2, 1).unwrap());
        assert!("x/2".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn dyadic_rounding() {
        let r = rational(1, 3).unwrap();
        assert_eq!(r.floor_dyadic(4), BigInt::from(5));
        assert_eq!(r.ceil_dyadic(4), BigInt::from(6));
    }
}
