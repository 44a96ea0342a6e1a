//! Factorial-ratio configurations
//! `F(n) = ∏ (a_i n)! / ∏ (b_j n)!` with `a_1 = (k+1)a`, `b_1 = ka` and
//! `Σ a_i = Σ b_j`, plus the Möbius compilation of a prime set.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exactmath::{bits_for_width, ln_at_bits, Enclosure, Rational};
use crate::numtheory::{squarefree_divisors, PrimeSet};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioConfig {
    k: u64,
    a_scale: u128,
    a_list: Vec<u128>,
    b_list: Vec<u128>,
    lcm: BigUint,
    origin: Option<PrimeSet>,
}

/// Enclosure of `Λ = Σ a_i ln a_i − Σ b_j ln b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub value: Enclosure,
}

/// Absolute width used for weights when the caller does not ask for one.
pub fn default_weight_width() -> Rational {
    Rational::new(1, 1_000_000_000i64).expect("nonzero")
}

/// Validated configuration: lists sorted descending, cross-list duplicates
/// cancelled one-for-one, `L` computed.
pub fn make_config(k: u64, a_scale: u128, a_list: &[u128], b_list: &[u128]) -> Result<RatioConfig> {
    build(k, a_scale, a_list, b_list, None)
}

fn build(
    k: u64,
    a_scale: u128,
    a_list: &[u128],
    b_list: &[u128],
    origin: Option<PrimeSet>,
) -> Result<RatioConfig> {
    if k == 0 || a_scale == 0 {
        return Err(Error::InvalidConfig("k and a must be positive".into()));
    }
    if a_list.is_empty() || b_list.is_empty() {
        return Err(Error::InvalidConfig("factor lists must be nonempty".into()));
    }
    if a_list.iter().chain(b_list).any(|&v| v == 0) {
        return Err(Error::InvalidConfig("factor entries must be positive".into()));
    }
    let sum = |l: &[u128]| l.iter().fold(BigUint::from(0u32), |acc, &v| acc + v);
    let (sa, sb) = (sum(a_list), sum(b_list));
    if sa != sb {
        return Err(Error::InvalidConfig(format!(
            "factor sums differ: Σa = {sa}, Σb = {sb}"
        )));
    }

    // one-for-one cancellation of values present in both lists
    let mut counts: BTreeMap<u128, i64> = BTreeMap::new();
    for &v in a_list {
        *counts.entry(v).or_default() += 1;
    }
    for &v in b_list {
        *counts.entry(v).or_default() -= 1;
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (&v, &c) in counts.iter().rev() {
        if c > 0 {
            a.extend(std::iter::repeat_n(v, c as usize));
        } else if c < 0 {
            b.extend(std::iter::repeat_n(v, (-c) as usize));
        }
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidConfig("cancellation leaves an empty list".into()));
    }

    let a1 = (k as u128)
        .checked_add(1)
        .and_then(|k1| k1.checked_mul(a_scale))
        .ok_or_else(|| Error::Budget("(k+1)a overflows".into()))?;
    let b1 = (k as u128) * a_scale;
    if a[0] != a1 {
        return Err(Error::InvalidConfig(format!(
            "largest a-entry is {} but (k+1)a = {a1}",
            a[0]
        )));
    }
    if b[0] != b1 {
        return Err(Error::InvalidConfig(format!(
            "largest b-entry is {} but ka = {b1}",
            b[0]
        )));
    }
    if a.len() > 1 && a[1] > b1 {
        return Err(Error::InvalidConfig(format!(
            "ordering b_1 ≥ a_2 violated: a_2 = {} > b_1 = {b1}",
            a[1]
        )));
    }
    let lcm = a
        .iter()
        .chain(&b)
        .fold(BigUint::one(), |acc, &v| acc.lcm(&BigUint::from(v)));
    Ok(RatioConfig {
        k,
        a_scale,
        a_list: a,
        b_list: b,
        lcm,
        origin,
    })
}

/// Möbius compilation of `F*_k(P; n) = ∏_{m|Q} ((k+1)nQ/m)! / ((knQ/m)! (nQ/m)!)^{μ(m)}`.
pub fn compile_prime_set(k: u64, p: &PrimeSet) -> Result<RatioConfig> {
    let q = p
        .q_u128()
        .ok_or_else(|| Error::Budget(format!("Q of {p} exceeds 128 bits")))?;
    let big = |v: &BigUint| {
        v.to_u128()
            .ok_or_else(|| Error::Budget("compiled entry exceeds 128 bits".into()))
    };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for d in squarefree_divisors(p)? {
        let m = big(&d.m)?;
        let base = q / m;
        let top = base
            .checked_mul(k as u128 + 1)
            .ok_or_else(|| Error::Budget("compiled entry exceeds 128 bits".into()))?;
        let mid = base * k as u128;
        if d.mu > 0 {
            a.push(top);
            b.push(mid);
            b.push(base);
        } else {
            b.push(top);
            a.push(mid);
            a.push(base);
        }
    }
    build(k, q, &a, &b, Some(p.clone()))
}

impl RatioConfig {
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn a_scale(&self) -> u128 {
        self.a_scale
    }

    pub fn a_list(&self) -> &[u128] {
        &self.a_list
    }

    pub fn b_list(&self) -> &[u128] {
        &self.b_list
    }

    pub fn s(&self) -> usize {
        self.a_list.len()
    }

    pub fn t(&self) -> usize {
        self.b_list.len()
    }

    pub fn a1(&self) -> u128 {
        self.a_list[0]
    }

    pub fn b1(&self) -> u128 {
        self.b_list[0]
    }

    /// `L = lcm` of every entry.
    pub fn lcm(&self) -> &BigUint {
        &self.lcm
    }

    /// The prime set this configuration was compiled from, if any.
    pub fn prime_set(&self) -> Option<&PrimeSet> {
        self.origin.as_ref()
    }

    /// Same factor lists, scale and `k` (ignores provenance).
    pub fn same_factors(&self, other: &RatioConfig) -> bool {
        self.k == other.k
            && self.a_scale == other.a_scale
            && self.a_list == other.a_list
            && self.b_list == other.b_list
            && self.lcm == other.lcm
    }

    /// `∏ b_j`.
    pub fn b_product(&self) -> BigUint {
        self.b_list
            .iter()
            .fold(BigUint::one(), |acc, &v| acc * BigUint::from(v))
    }

    /// Stable digest of `(k, P)` for compiled configs or of the factor lists.
    pub fn config_id(&self) -> String {
        let text = match &self.origin {
            Some(p) => prime_set_id_text(self.k, p),
            None => format!(
                "general;k={};a={:?};b={:?}",
                self.k, self.a_list, self.b_list
            ),
        };
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

fn prime_set_id_text(k: u64, p: &PrimeSet) -> String {
    format!("primeset;k={k};P={:?}", p.primes())
}

/// Digest identifying a compiled `(k, P)` pair.
pub fn prime_set_config_id(k: u64, p: &PrimeSet) -> String {
    hex::encode(Sha256::digest(prime_set_id_text(k, p).as_bytes()))
}

/// `Λ` summed term by term from per-entry logarithm enclosures.
pub fn weight_direct(cfg: &RatioConfig) -> Result<Weight> {
    weight_direct_with_width(cfg, &default_weight_width())
}

pub fn weight_direct_with_width(cfg: &RatioConfig, width: &Rational) -> Result<Weight> {
    let total: BigUint = cfg
        .a_list
        .iter()
        .chain(&cfg.b_list)
        .fold(BigUint::from(0u32), |acc, &v| acc + v);
    let bits = bits_for_width(width) + total.bits() + 8;
    let mut acc = Enclosure::zero();
    for (list, sign) in [(&cfg.a_list, 1i64), (&cfg.b_list, -1i64)] {
        for &v in list.iter() {
            let q = Rational::from_integer(BigInt::from(v));
            let term = ln_at_bits(&q, bits)?.mul_rational(&(q * Rational::from(sign)));
            acc = acc.add(&term);
        }
    }
    Ok(Weight { value: acc })
}

/// `φ(Q) · ln((k+1)^{k+1} / k^k)`.
pub fn weight_closed_form(k: u64, p: &PrimeSet) -> Result<Weight> {
    weight_closed_form_with_width(k, p, &default_weight_width())
}

pub fn weight_closed_form_with_width(k: u64, p: &PrimeSet, width: &Rational) -> Result<Weight> {
    weight_closed_form_at_bits(k, p, bits_for_width(width) + p.phi_q().bits() + 4)
}

pub(crate) fn weight_closed_form_at_bits(k: u64, p: &PrimeSet, bits: u64) -> Result<Weight> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let ratio = Rational::new(
        BigInt::from(k + 1).pow((k + 1) as u32),
        BigInt::from(k).pow(k as u32),
    )?;
    let phi = Rational::from(p.phi_q().clone());
    Ok(Weight {
        value: ln_at_bits(&ratio, bits)?.mul_rational(&phi),
    })
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 4] = ["erdos", "bachraoui", "sainose", "balliet4"];

/// Published single-level configurations.
pub fn preset(name: &str) -> Result<RatioConfig> {
    match name {
        "erdos" => make_config(1, 1, &[2], &[1, 1]),
        "bachraoui" => make_config(2, 2, &[6, 1], &[4, 3]),
        "sainose" => make_config(2, 2, &[6, 2], &[4, 3, 1]),
        "balliet4" => make_config(4, 6, &[30, 12, 8, 3, 2], &[24, 15, 10, 6]),
        other => Err(Error::Parse(format!(
            "unknown preset {other:?}; expected one of {PRESET_NAMES:?}"
        ))),
    }
}

/// JSON literal accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigLiteral {
    PrimeSet { k: u64, primes: Vec<u64> },
    Factors { k: u64, a: Vec<u64>, b: Vec<u64> },
}

impl ConfigLiteral {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("config literal: {e}")))
    }

    pub fn to_config(&self) -> Result<RatioConfig> {
        match self {
            ConfigLiteral::PrimeSet { k, primes } => {
                compile_prime_set(*k, &PrimeSet::new(primes.iter().copied())?)
            }
            ConfigLiteral::Factors { k, a, b } => {
                let a: Vec<u128> = a.iter().map(|&v| v as u128).collect();
                let b: Vec<u128> = b.iter().map(|&v| v as u128).collect();
                let top = a.iter().copied().max().unwrap_or(0);
                let k1 = *k as u128 + 1;
                if *k == 0 || top % k1 != 0 {
                    return Err(Error::InvalidConfig(format!(
                        "largest a-entry {top} is not a multiple of k+1 = {k1}"
                    )));
                }
                make_config(*k, top / k1, &a, &b)
            }
        }
    }
}
