//! Independent re-check of a [`Certificate`].
//!
//! Thresholds are re-derived with the event-merge indicator sweep rather
//! than the segmented floor sweep that generated them, and both sides of the
//! inequality are recomputed at twice the starting precision.
//!
//! Tamper cases exercised by the test suite:
//!
//! 1. `d_1` lowered by one: rejected under `thresholds`.
//! 2. `verdict` set to `holds` while `lhs.lo ≤ rhs.hi`: rejected under `verdict`.
//! 3. `c_upper` changed: rejected under `c_upper`.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{
    base_bits, c_upper_bound, m_cap, separate, string_verdict_consistent, Certificate, Verdict, CERTIFICATE_VERSION,
    MAX_EVAL_BITS,
};
use crate::exactmath::{DecimalInterval, Enclosure, Rational};
use crate::gsweep::{g_floor, g_indicator, sweep_events};
use crate::numtheory::PrimeSet;
use crate::ratioconfig::{compile_prime_set, weight_direct};

/// Names the first certificate field that failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub field: String,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum VerifyOutcome {
    Accept,
    Reject(Rejection),
}

impl VerifyOutcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, VerifyOutcome::Accept)
    }
}

fn reject<T>(field: &str, reason: impl Into<String>) -> Result<T, Rejection> {
    Err(Rejection {
        field: field.into(),
        reason: reason.into(),
    })
}

pub fn verify_certificate(cert: &Certificate) -> VerifyOutcome {
    match check(cert) {
        Ok(()) => VerifyOutcome::Accept,
        Err(r) => VerifyOutcome::Reject(r),
    }
}

fn check(cert: &Certificate) -> Result<(), Rejection> {
    if cert.version != CERTIFICATE_VERSION {
        return reject("version", format!("unsupported version {}", cert.version));
    }
    let k = cert.k;
    if k == 0 {
        return reject("k", "k must be positive");
    }
    let p = match PrimeSet::new(cert.primes.iter().copied()) {
        Ok(p) if p.primes() == cert.primes.as_slice() => p,
        Ok(_) => return reject("primes", "primes are not listed in increasing order"),
        Err(e) => return reject("primes", e.to_string()),
    };
    if cert.q != p.q().to_string() {
        return reject("Q", format!("product of primes is {}", p.q()));
    }
    if cert.phi_q != p.phi_q().to_string() {
        return reject("phiQ", format!("φ(Q) is {}", p.phi_q()));
    }
    let bound = &cert.primorial_bound;
    if !bound.c.is_positive() || bound.beta <= Rational::one() {
        return reject("primorial_bound", "need C > 0 and β > 1");
    }
    let Some(scale) = p.q_u128().and_then(|q| q.checked_mul(k as u128 + 1)) else {
        return reject("Q", "(k+1)Q exceeds 128 bits");
    };
    let d_limit: u64 = match cert.scan_limit_d.parse() {
        Ok(d) if d >= 2 => d,
        _ => return reject("scan_limit_D", format!("{:?} is not an integer ≥ 2", cert.scan_limit_d)),
    };
    let period_end = scale + 1;
    if cert.exhaustive != (d_limit as u128 >= period_end) || d_limit as u128 > period_end {
        return reject(
            "exhaustive",
            format!("scan limit {d_limit} against period end {period_end} contradicts exhaustive = {}", cert.exhaustive),
        );
    }

    let thresholds = check_thresholds(cert, &p, scale, d_limit)?;

    if cert.m_found != thresholds.len() as u64 {
        return reject("m_found", format!("{} thresholds listed", thresholds.len()));
    }
    let cap = m_cap(&p);
    if cert.m_cap != cap.to_string() {
        return reject("m_cap", format!("2^(#P−1) is {cap}"));
    }
    if !cert.exhaustive && BigUint::from(cert.m_found) > cap {
        return reject("m_found", "more levels than |G| allows");
    }
    let c = match c_upper_bound(&p, scale, &thresholds, d_limit, cert.exhaustive) {
        Ok(c) => c,
        Err(e) => return reject("c_upper", e.to_string()),
    };
    if cert.c_upper != c {
        return reject("c_upper", format!("recomputed {c}"));
    }

    let phi = Rational::from(p.phi_q().clone());
    let bits = 2 * base_bits(&[&phi, &c]);
    let (lhs, rhs, verdict) = match separate(k, &p, &c, &bound.beta, cert.exhaustive, bits, 2 * MAX_EVAL_BITS) {
        Ok(v) => v,
        Err(e) => return reject("lhs", e.to_string()),
    };
    let lhs_cert = parse_interval("lhs", &cert.lhs)?;
    if !lhs_cert.overlaps(&lhs) {
        return reject("lhs", format!("recomputed {lhs}"));
    }
    let cfg = compile_prime_set(k, &p).map_err(|e| Rejection {
        field: "lhs".into(),
        reason: e.to_string(),
    })?;
    match weight_direct(&cfg) {
        Ok(w) if w.value.overlaps(&lhs) => {}
        Ok(w) => return reject("lhs", format!("term-by-term weight {} misses closed form {lhs}", w.value)),
        Err(e) => return reject("lhs", e.to_string()),
    }
    let rhs_cert = parse_interval("rhs", &cert.rhs)?;
    if !rhs_cert.overlaps(&rhs) {
        return reject("rhs", format!("recomputed {rhs}"));
    }

    if !string_verdict_consistent(&cert.lhs, &cert.rhs, cert.verdict)
        || (cert.verdict == Verdict::ConditionFalse && !cert.exhaustive)
    {
        return reject("verdict", format!("{} is inconsistent with the listed enclosures", cert.verdict));
    }
    if cert.verdict != verdict {
        return reject("verdict", format!("recomputed verdict is {verdict}"));
    }
    Ok(())
}

fn parse_interval(field: &str, d: &DecimalInterval) -> Result<Enclosure, Rejection> {
    d.to_enclosure().map_err(|e| Rejection {
        field: field.into(),
        reason: e.to_string(),
    })
}

fn check_thresholds(cert: &Certificate, p: &PrimeSet, scale: u128, d_limit: u64) -> Result<Vec<u64>, Rejection> {
    let listed = cert.threshold_values().map_err(|e| Rejection {
        field: "thresholds".into(),
        reason: e.to_string(),
    })?;
    let cfg = compile_prime_set(cert.k, p).map_err(|e| Rejection {
        field: "thresholds".into(),
        reason: e.to_string(),
    })?;
    let g_at = |d: u64| -> Result<(i64, i64), Rejection> {
        let x = Rational::new(d, scale).expect("scale is positive");
        let f = g_floor(&cfg, &x);
        let i = g_indicator(cert.k, p, &x);
        match (f, i) {
            (Ok(f), Ok(i)) => Ok((f, i)),
            (Err(e), _) | (_, Err(e)) => reject("thresholds", e.to_string()),
        }
    };
    // least d with d / scale ≥ 1 / b_1
    let domain_start = scale.div_ceil(cfg.b1()) as u64;
    let mut prev = 1u64;
    for (idx, &d) in listed.iter().enumerate() {
        let level = idx as i64 + 1;
        let label = format!("d_{level} = {d}");
        if d <= prev || d > d_limit {
            return reject("thresholds", format!("{label} is out of order or beyond D"));
        }
        if !p.is_coprime(d) {
            return reject("thresholds", format!("{label} is not coprime to Q"));
        }
        if d < domain_start {
            return reject("thresholds", format!("{label} lies below 1 / b_1"));
        }
        let (at, at_i) = g_at(d)?;
        let (before, before_i) = if d > domain_start { g_at(d - 1)? } else { (level - 1, level - 1) };
        if at != at_i || before != before_i {
            return reject("thresholds", format!("floor and indicator forms disagree near {label}"));
        }
        if at < level || before >= level {
            return reject("thresholds", format!("{label} is not the first crossing of level {level}"));
        }
        prev = d;
    }
    let swept = sweep_events(cert.k, p, d_limit).map_err(|e| Rejection {
        field: "thresholds".into(),
        reason: e.to_string(),
    })?;
    if swept != listed {
        let at = swept.iter().zip(&listed).position(|(a, b)| a != b).unwrap_or(swept.len().min(listed.len()));
        return reject(
            "thresholds",
            format!(
                "independent sweep differs at level {}: {:?} vs listed {:?}",
                at + 1,
                swept.get(at),
                listed.get(at)
            ),
        );
    }
    Ok(listed)
}
