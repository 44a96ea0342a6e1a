//! Decides `Λ > c · ln β` for compiled prime-set configurations and packages
//! the outcome as a re-checkable [`Certificate`].
//!
//! `Λ = φ(Q) ln((k+1)^{k+1} / k^k)`. When the sweep is exhaustive `c` is
//! exact; otherwise `c` is bounded above by the found thresholds plus the
//! tail `(2^{#P−1} − m) · (k+1)Q / D`, which is sound because `|G|` never
//! exceeds `2^{#P−1}` and every unfound threshold lies beyond `D`.

mod effective;
mod verify;

pub use effective::{effective_threshold, nk_lower_bound, validity_floor, EffectiveBound};
pub use verify::{verify_certificate, Rejection, VerifyOutcome};

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exactmath::{ln_at_bits, DecimalInterval, Enclosure, Rational};
use crate::gsweep::{sweep_with, SweepMode, SweepOptions, SweepReport, DEFAULT_EVENT_BUDGET};
use crate::numtheory::PrimeSet;
use crate::ratioconfig::{compile_prime_set, prime_set_config_id, weight_closed_form_at_bits, weight_direct, RatioConfig};
use crate::{Error, Result};

/// Certificate schema version.
pub const CERTIFICATE_VERSION: u64 = 1;

/// Cap on fixed-point bits when separating the two sides.
pub const MAX_EVAL_BITS: u64 = 1 << 13;

/// Decimal digits first tried for the displayed enclosures.
const MIN_DISPLAY_DIGITS: u32 = 6;
const MAX_DISPLAY_DIGITS: u32 = 200;

pub const DEFAULT_INITIAL_D: u64 = 1_000_000;
pub const DEFAULT_MAX_D: u64 = 256_000_000;

/// `Θ(x) ≤ C · β^x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimorialBound {
    #[serde(rename = "C")]
    pub c: Rational,
    pub beta: Rational,
}

impl PrimorialBound {
    /// `(1/8, 4)`.
    pub fn elementary() -> Self {
        PrimorialBound {
            c: Rational::new(1, 8).expect("nonzero"),
            beta: Rational::from(4),
        }
    }

    /// `(1, 17/5)`.
    pub fn sharper() -> Self {
        PrimorialBound {
            c: Rational::one(),
            beta: Rational::new(17, 5).expect("nonzero"),
        }
    }

    pub fn new(c: Rational, beta: Rational) -> Result<Self> {
        if !c.is_positive() || beta <= Rational::one() {
            return Err(Error::Domain(format!("primorial bound needs C > 0 and β > 1, got ({c}, {beta})")));
        }
        Ok(PrimorialBound { c, beta })
    }

    /// Maps the base given on the command line (`4` or `3.4`).
    pub fn from_base(text: &str) -> Result<Self> {
        match text.trim() {
            "4" => Ok(Self::elementary()),
            "3.4" | "17/5" => Ok(Self::sharper()),
            other => Err(Error::Parse(format!("theta bound must be 4 or 3.4, got {other:?}"))),
        }
    }
}

impl Default for PrimorialBound {
    fn default() -> Self {
        Self::elementary()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    /// The inequality fails for this configuration and bound. Says nothing
    /// about the interval statement itself.
    ConditionFalse,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::ConditionFalse => "condition-false",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Serialized verdict for one `(k, P, C, β)`. Field order is part of the
/// format; large integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u64,
    pub k: u64,
    pub primes: Vec<u64>,
    #[serde(rename = "Q")]
    pub q: String,
    #[serde(rename = "phiQ")]
    pub phi_q: String,
    pub primorial_bound: PrimorialBound,
    #[serde(rename = "scan_limit_D")]
    pub scan_limit_d: String,
    pub exhaustive: bool,
    pub thresholds: Vec<String>,
    pub m_found: u64,
    pub m_cap: String,
    pub c_upper: Rational,
    pub lhs: DecimalInterval,
    pub rhs: DecimalInterval,
    pub verdict: Verdict,
    pub generator: String,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate JSON: {e}")))?;
        match value.get("version").and_then(|v| v.as_u64()) {
            Some(CERTIFICATE_VERSION) => {}
            Some(v) => return Err(Error::Parse(format!("unknown certificate version {v}"))),
            None => return Err(Error::Parse("certificate has no version".into())),
        }
        serde_json::from_value(value).map_err(|e| Error::Parse(format!("certificate JSON: {e}")))
    }

    /// SHA-256 of the canonical JSON.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn prime_set(&self) -> Result<PrimeSet> {
        PrimeSet::new(self.primes.iter().copied())
    }

    pub fn threshold_values(&self) -> Result<Vec<u64>> {
        self.thresholds
            .iter()
            .map(|s| s.parse().map_err(|_| Error::Parse(format!("threshold {s:?} is not an integer"))))
            .collect()
    }
}

/// Settings for [`certify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub bound: PrimorialBound,
    pub initial_d: u64,
    pub max_d: u64,
    pub sweep: SweepOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            bound: PrimorialBound::default(),
            initial_d: DEFAULT_INITIAL_D,
            max_d: DEFAULT_MAX_D,
            sweep: SweepOptions {
                event_budget: DEFAULT_EVENT_BUDGET,
                ..SweepOptions::default()
            },
        }
    }
}

/// `2^{#P−1}`.
pub fn m_cap(p: &PrimeSet) -> BigUint {
    crate::gsweep::max_abs_bound(p)
}

/// Upper bound on `c`: exact when `exhaustive`, otherwise with the tail term.
pub fn c_upper_bound(p: &PrimeSet, scale: u128, thresholds: &[u64], scan_limit: u64, exhaustive: bool) -> Result<Rational> {
    let mut c = Rational::zero();
    for &d in thresholds {
        c = c + Rational::new(scale, d)?;
    }
    if !exhaustive {
        let cap = m_cap(p);
        let found = BigUint::from(thresholds.len());
        if found > cap {
            return Err(Error::Integrity(format!(
                "{} thresholds exceed the level cap {cap}",
                thresholds.len()
            )));
        }
        let tail = Rational::from(cap - found) * Rational::new(scale, scan_limit)?;
        c = c + tail;
    }
    Ok(c)
}

/// Verdict from the two enclosures.
pub fn decide(lhs: &Enclosure, rhs: &Enclosure, exhaustive: bool) -> Verdict {
    if lhs.gt(rhs) {
        Verdict::Holds
    } else if exhaustive && lhs.lt(rhs) {
        Verdict::ConditionFalse
    } else {
        Verdict::Undecided
    }
}

/// Starting bits for an absolute width near `2^-40` on values up to `magnitude`.
pub(crate) fn base_bits(magnitudes: &[&Rational]) -> u64 {
    let top = magnitudes.iter().map(|m| m.abs().ceil().bits()).max().unwrap_or(0);
    40 + top
}

/// `(LHS, RHS)` at `bits`.
pub(crate) fn sides_at_bits(k: u64, p: &PrimeSet, c: &Rational, beta: &Rational, bits: u64) -> Result<(Enclosure, Enclosure)> {
    let lhs = weight_closed_form_at_bits(k, p, bits)?.value;
    let rhs = ln_at_bits(beta, bits)?.mul_rational(c);
    Ok((lhs, rhs))
}

/// Escalates precision from `bits` while the sides overlap.
pub(crate) fn separate(
    k: u64,
    p: &PrimeSet,
    c: &Rational,
    beta: &Rational,
    exhaustive: bool,
    mut bits: u64,
    cap: u64,
) -> Result<(Enclosure, Enclosure, Verdict)> {
    loop {
        let (lhs, rhs) = sides_at_bits(k, p, c, beta, bits)?;
        let verdict = decide(&lhs, &rhs, exhaustive);
        // only overlap is a precision question
        if verdict != Verdict::Undecided || !lhs.overlaps(&rhs) || bits >= cap {
            return Ok((lhs, rhs, verdict));
        }
        bits = (bits * 2).min(cap);
    }
}

/// Outward-rounded strings, with enough digits to keep the verdict visible.
pub(crate) fn display_pair(lhs: &Enclosure, rhs: &Enclosure, verdict: Verdict) -> (DecimalInterval, DecimalInterval) {
    let mut digits = MIN_DISPLAY_DIGITS;
    loop {
        let (l, r) = (lhs.to_decimals(digits), rhs.to_decimals(digits));
        if digits >= MAX_DISPLAY_DIGITS || string_verdict_consistent(&l, &r, verdict) {
            return (l, r);
        }
        digits += 6;
    }
}

/// `holds ⟺ lhs.lo > rhs.hi` and `condition-false ⟹ lhs.hi < rhs.lo` on
/// the displayed decimals.
pub(crate) fn string_verdict_consistent(l: &DecimalInterval, r: &DecimalInterval, verdict: Verdict) -> bool {
    let (Ok(le), Ok(re)) = (l.to_enclosure(), r.to_enclosure()) else {
        return false;
    };
    match verdict {
        Verdict::Holds => le.gt(&re),
        Verdict::ConditionFalse => !le.gt(&re) && le.lt(&re),
        Verdict::Undecided => !le.gt(&re),
    }
}

pub(crate) fn generator_tag() -> String {
    format!("primegap {} segmented-floor-sweep", env!("CARGO_PKG_VERSION"))
}

/// Builds the certificate for `(k, P)` from a sweep of its compiled
/// configuration.
pub fn evaluate_condition(k: u64, p: &PrimeSet, report: &SweepReport, bound: &PrimorialBound) -> Result<Certificate> {
    let expected_id = prime_set_config_id(k, p);
    if report.config_id != expected_id {
        return Err(Error::Integrity(format!(
            "sweep report {} does not belong to k = {k}, P = {p}",
            report.config_id
        )));
    }
    let scale = p
        .q_u128()
        .and_then(|q| q.checked_mul(k as u128 + 1))
        .ok_or_else(|| Error::Budget("(k+1)Q exceeds 128 bits".into()))?;
    if report.scale != scale {
        return Err(Error::Integrity(format!("report scale {} is not (k+1)Q = {scale}", report.scale)));
    }
    if report.thresholds.windows(2).any(|w| w[0] >= w[1])
        || report.thresholds.last().is_some_and(|&d| d > report.scan_limit_d)
    {
        return Err(Error::Integrity("report thresholds are not increasing within D".into()));
    }
    let c = c_upper_bound(p, scale, &report.thresholds, report.scan_limit_d, report.exhaustive)?;
    let phi = Rational::from(p.phi_q().clone());
    let bits = base_bits(&[&phi, &c]);
    let (lhs, rhs, verdict) = separate(k, p, &c, &bound.beta, report.exhaustive, bits, MAX_EVAL_BITS)?;
    let (lhs_text, rhs_text) = display_pair(&lhs, &rhs, verdict);
    Ok(Certificate {
        version: CERTIFICATE_VERSION,
        k,
        primes: p.primes().to_vec(),
        q: p.q().to_string(),
        phi_q: p.phi_q().to_string(),
        primorial_bound: bound.clone(),
        scan_limit_d: report.scan_limit_d.to_string(),
        exhaustive: report.exhaustive,
        thresholds: report.thresholds.iter().map(u64::to_string).collect(),
        m_found: report.m_found as u64,
        m_cap: m_cap(p).to_string(),
        c_upper: c,
        lhs: lhs_text,
        rhs: rhs_text,
        verdict,
        generator: generator_tag(),
    })
}

/// A certificate together with the sweep that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyRun {
    pub certificate: Certificate,
    pub report: SweepReport,
}

/// Exhaustive when one period fits the event budget; otherwise bounded
/// sweeps with `D` doubling from `initial_d` until decided or `max_d`.
pub fn certify(k: u64, p: &PrimeSet, opts: &CertifyOptions) -> Result<Certificate> {
    certify_run(k, p, opts).map(|r| r.certificate)
}

pub fn certify_run(k: u64, p: &PrimeSet, opts: &CertifyOptions) -> Result<CertifyRun> {
    if opts.initial_d < 2 || opts.max_d < opts.initial_d {
        return Err(Error::Domain(format!(
            "need 2 ≤ initial D ≤ max D, got {} and {}",
            opts.initial_d, opts.max_d
        )));
    }
    let cfg = compile_prime_set(k, p)?;
    if fits_exhaustive(k, p, opts.sweep.event_budget) {
        let report = sweep_with(&cfg, SweepMode::Exhaustive, &opts.sweep)?;
        if report.exhaustive {
            let certificate = evaluate_condition(k, p, &report, &opts.bound)?;
            return Ok(CertifyRun { certificate, report });
        }
    }
    let mut d = opts.initial_d;
    loop {
        let report = sweep_with(&cfg, SweepMode::Bounded(d), &opts.sweep)?;
        let certificate = evaluate_condition(k, p, &report, &opts.bound)?;
        if certificate.verdict != Verdict::Undecided || report.exhaustive || d >= opts.max_d {
            return Ok(CertifyRun { certificate, report });
        }
        d = d.saturating_mul(2).min(opts.max_d);
    }
}

/// Whether one period of `(k, P)` has at most `budget` jump events.
pub fn fits_exhaustive(k: u64, p: &PrimeSet, budget: u64) -> bool {
    BigUint::from(2 * (k + 1)) * p.phi_q() <= BigUint::from(budget)
}

/// Condition check for a general configuration, with `Λ` summed term by term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub config_id: String,
    pub c: Rational,
    pub lhs: DecimalInterval,
    pub rhs: DecimalInterval,
    pub verdict: Verdict,
}

pub fn evaluate_general(cfg: &RatioConfig, report: &SweepReport, bound: &PrimorialBound) -> Result<ConditionReport> {
    if report.config_id != cfg.config_id() {
        return Err(Error::Integrity("sweep report belongs to another configuration".into()));
    }
    let c = report
        .c_exact
        .clone()
        .ok_or_else(|| Error::Domain("general configurations need an exhaustive sweep".into()))?;
    let lhs = weight_direct(cfg)?.value;
    let mut bits = base_bits(&[&c]);
    let (rhs, verdict) = loop {
        let rhs = ln_at_bits(&bound.beta, bits)?.mul_rational(&c);
        let verdict = decide(&lhs, &rhs, true);
        if verdict != Verdict::Undecided || bits >= MAX_EVAL_BITS {
            break (rhs, verdict);
        }
        bits *= 2;
    };
    let (lhs_text, rhs_text) = display_pair(&lhs, &rhs, verdict);
    Ok(ConditionReport {
        config_id: cfg.config_id(),
        c,
        lhs: lhs_text,
        rhs: rhs_text,
        verdict,
    })
}
