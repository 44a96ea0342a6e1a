//! Published values for the compiled prime-set cases, and a structured
//! comparison against computed certificates.
//!
//! Mismatches are reported as [`Discrepancy`] records rather than errors:
//! a few published digits disagree with what the definitions produce, and
//! each record says whether the published left/right-hand sides agree with
//! the computed ones anyway.

use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, PrimorialBound};
use crate::exactmath::Rational;
use crate::{Error, Result};

/// Bounded-scan parameters as published: `(2^exponent − count) / D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedTail {
    pub exponent: u32,
    pub count: u64,
    pub scan_limit: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedCase {
    pub k: u64,
    pub primes: Vec<u64>,
    /// `true` for the sharper `(1, 17/5)` bound.
    pub sharper_bound: bool,
    /// Exact level count for exhaustive cases, a lower bound otherwise.
    pub m: u64,
    /// `(i, d_i)` pairs that were printed.
    pub thresholds: Vec<(usize, u64)>,
    pub c: Option<String>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub tail: Option<PublishedTail>,
    pub holds: bool,
}

impl PublishedCase {
    pub fn bound(&self) -> PrimorialBound {
        if self.sharper_bound {
            PrimorialBound::sharper()
        } else {
            PrimorialBound::elementary()
        }
    }

    pub fn label(&self) -> String {
        let primes: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        let bound = if self.sharper_bound { " (β = 17/5)" } else { "" };
        format!("k={} P={{{}}}{bound}", self.k, primes.join(","))
    }
}

#[allow(clippy::too_many_arguments)]
fn case(
    k: u64,
    primes: &[u64],
    m: u64,
    thresholds: &[(usize, u64)],
    c: Option<&str>,
    lhs: Option<&str>,
    rhs: Option<&str>,
    tail: Option<(u32, u64, u64)>,
    holds: bool,
) -> PublishedCase {
    PublishedCase {
        k,
        primes: primes.to_vec(),
        sharper_bound: false,
        m,
        thresholds: thresholds.to_vec(),
        c: c.map(str::to_string),
        lhs: lhs.map(str::to_string),
        rhs: rhs.map(str::to_string),
        tail: tail.map(|(exponent, count, scan_limit)| PublishedTail {
            exponent,
            count,
            scan_limit,
        }),
        holds,
    }
}

/// Every published prime-set case, in order of `k`.
pub fn published_cases() -> Vec<PublishedCase> {
    let mut k5_sharp = case(5, &[2, 3, 5], 2, &[(1, 13), (2, 49)], Some("11160/637"), None, Some("21.440"), None, true);
    k5_sharp.sharper_bound = true;
    vec![
        case(3, &[2, 3], 1, &[(1, 13)], Some("24/13"), None, None, None, true),
        case(4, &[2, 3], 1, &[(1, 13)], Some("30/13"), None, None, None, true),
        case(5, &[2, 3, 5], 2, &[(1, 13), (2, 49)], Some("11160/637"), Some("21.627"), Some("24.287"), None, false),
        k5_sharp,
        case(6, &[2, 3, 5], 2, &[(1, 13), (2, 43)], None, Some("22.967"), Some("22.092"), None, true),
        case(5, &[2, 3, 5, 13], 3, &[(1, 19), (2, 49), (3, 1309)], None, Some("259.523"), Some("239.414"), None, true),
        case(8, &[2, 3, 5, 7, 19, 31], 9, &[(1, 41), (9, 785179)], None, Some("81375.551"), Some("73787.953"), None, true),
        case(11, &[2, 3, 5, 7, 11, 31, 43], 11, &[(1, 61), (11, 7544113)], None, Some("2081740.831"), Some("2067240.713"), None, true),
        case(12, &[2, 3, 5, 7, 11, 31, 43], 13, &[(1, 61), (13, 3233107)], None, Some("2132199.327"), Some("1997810.591"), None, true),
        case(
            13,
            &[2, 3, 5, 7, 11, 13, 31, 43],
            11,
            &[(1, 61), (11, 57859)],
            None,
            Some("26145220.719"),
            Some("26139393.317"),
            Some((6, 11, 1_200_000)),
            true,
        ),
        case(
            14,
            &[2, 3, 5, 7, 11, 13, 31, 43, 61, 71, 83],
            28,
            &[(1, 101), (28, 611203)],
            None,
            Some("9183103103292.885"),
            Some("9173820030601.213"),
            Some((10, 28, 4_000_000)),
            true,
        ),
        case(
            15,
            &[2, 3, 5, 7, 11, 13, 43, 61, 71, 83],
            24,
            &[(1, 101), (24, 1186213)],
            None,
            Some("311662041740.439"),
            Some("311652500411.160"),
            Some((9, 24, 20_000_000)),
            true,
        ),
    ]
}

/// The published case for `(k, P)` under the elementary bound.
pub fn published_case(k: u64, primes: &[u64]) -> Option<PublishedCase> {
    published_cases()
        .into_iter()
        .find(|c| c.k == k && c.primes == primes && !c.sharper_bound)
}

/// One published value that differs from the computed one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub case: String,
    pub field: String,
    pub published: String,
    pub computed: String,
    pub note: String,
}

/// Absolute tolerance for printed three-decimal values.
pub fn display_tolerance() -> Rational {
    Rational::new(1, 1000).expect("nonzero")
}

/// Distance from a printed decimal to an interval given as decimal strings.
pub fn distance_to(printed: &str, lo: &str, hi: &str) -> Result<Rational> {
    let v = Rational::from_decimal_str(printed)?;
    let lo = Rational::from_decimal_str(lo)?;
    let hi = Rational::from_decimal_str(hi)?;
    Ok(if v < lo {
        lo - v
    } else if v > hi {
        v - hi
    } else {
        Rational::zero()
    })
}

/// Compares a certificate with its published case.
pub fn compare(case: &PublishedCase, cert: &Certificate) -> Result<Vec<Discrepancy>> {
    if cert.k != case.k || cert.primes != case.primes {
        return Err(Error::Domain(format!("certificate is not for {}", case.label())));
    }
    let tol = display_tolerance();
    let near = |printed: &Option<String>, lo: &str, hi: &str| -> Result<Option<Rational>> {
        match printed {
            Some(p) => distance_to(p, lo, hi).map(Some),
            None => Ok(None),
        }
    };
    let lhs_gap = near(&case.lhs, &cert.lhs.lo, &cert.lhs.hi)?;
    let rhs_gap = near(&case.rhs, &cert.rhs.lo, &cert.rhs.hi)?;
    let rhs_agrees = rhs_gap.as_ref().map(|g| *g <= tol);
    let side_note = match rhs_agrees {
        Some(true) => "published right-hand side agrees with the computed value",
        Some(false) => "published right-hand side differs from the computed value",
        None => "no published right-hand side to compare",
    };
    let mut out = Vec::new();
    let mut push = |field: String, published: String, computed: String, note: &str| {
        out.push(Discrepancy {
            case: case.label(),
            field,
            published,
            computed,
            note: note.to_string(),
        })
    };
    let computed = cert.threshold_values()?;
    for &(i, d) in &case.thresholds {
        let got = computed.get(i - 1).copied();
        if got != Some(d) {
            push(
                format!("d_{i}"),
                d.to_string(),
                got.map_or_else(|| "absent".into(), |g| g.to_string()),
                side_note,
            );
        }
    }
    let m_ok = if case.tail.is_some() {
        cert.m_found >= case.m
    } else {
        cert.m_found == case.m
    };
    if !m_ok {
        push("M".into(), case.m.to_string(), cert.m_found.to_string(), side_note);
    }
    if let Some(c) = &case.c {
        if cert.c_upper.to_string() != *c {
            push("c".into(), c.clone(), cert.c_upper.to_string(), side_note);
        }
    }
    if let Some(t) = &case.tail {
        let exponent = case.primes.len() as u32 - 1;
        if t.exponent != exponent {
            let note = if rhs_agrees == Some(true) {
                "published right-hand side equals the value computed with the level cap 2^(#P−1)"
            } else {
                "level cap is 2^(#P−1)"
            };
            push("tail_exponent".into(), t.exponent.to_string(), exponent.to_string(), note);
        }
        if cert.scan_limit_d != t.scan_limit.to_string() {
            push("scan_limit_D".into(), t.scan_limit.to_string(), cert.scan_limit_d.clone(), side_note);
        }
    }
    if let (Some(gap), Some(p)) = (&lhs_gap, &case.lhs) {
        if *gap > tol {
            push("lhs".into(), p.clone(), format!("[{}, {}]", cert.lhs.lo, cert.lhs.hi), "outside ±0.001");
        }
    }
    if let (Some(gap), Some(p)) = (&rhs_gap, &case.rhs) {
        if *gap > tol {
            push("rhs".into(), p.clone(), format!("[{}, {}]", cert.rhs.lo, cert.rhs.hi), "outside ±0.001");
        }
    }
    let holds = cert.verdict == crate::certify::Verdict::Holds;
    if holds != case.holds {
        push("verdict".into(), case.holds.to_string(), cert.verdict.to_string(), "");
    }
    Ok(out)
}
