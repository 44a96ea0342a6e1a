//! First-crossing sweep.
//!
//! For a compiled prime-set configuration the sweep runs in the integer
//! coordinate `y = (k+1)Q x`. After all jumps at `y = d` are applied,
//!
//! ```text
//! G(d) = Φ(d) − Φ(⌊kd/(k+1)⌋) − Φ(⌊d/(k+1)⌋),   Φ(n) = #{u ≤ n : (u, Q) = 1}
//! ```
//!
//! and `G` rises only at integers coprime to `Q`, so every threshold is an
//! integer `d ≥ 2`. The range is cut into fixed-length segments; each one
//! starts from an absolute `G` value computed by floor arithmetic, advances
//! three counters, and must land on the floor value again at its end.
//! Segment results are merged in ascending order, which makes the output
//! independent of scheduling and thread count.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{g_floor_scaled, CoprimeWheel};
use crate::exactmath::Rational;
use crate::ratioconfig::RatioConfig;
use crate::{Error, Result};

/// Default cap on the jump-event count of one exhaustive period.
pub const DEFAULT_EVENT_BUDGET: u64 = 50_000_000;

/// Default number of `d` values per segment.
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    /// One full period of `G`, starting at `x = 1/b_1`.
    Exhaustive,
    /// All thresholds `d ≤ D`.
    Bounded(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Largest event count accepted for an exhaustive sweep.
    pub event_budget: u64,
    pub segment_len: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            event_budget: DEFAULT_EVENT_BUDGET,
            segment_len: DEFAULT_SEGMENT_LEN,
        }
    }
}

/// Thresholds `d_1 < d_2 < …` with `x_i = d_i / scale` the least `x ≥ 1/b_1`
/// where `G(x) ≥ i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config_id: String,
    /// `(k+1)Q` for prime-set configurations, `L` otherwise.
    #[serde(with = "u128_string")]
    pub scale: u128,
    pub thresholds: Vec<u64>,
    pub m_found: usize,
    pub scan_limit_d: u64,
    pub exhaustive: bool,
    /// `Σ scale / d_i`; equals `c = Σ 1/c_i` when `exhaustive`.
    pub c_found: Rational,
    pub c_exact: Option<Rational>,
}

mod u128_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl SweepReport {
    fn new(config_id: String, scale: u128, thresholds: Vec<u64>, scan_limit_d: u64, exhaustive: bool) -> Result<Self> {
        let c_found = reciprocal_sum(scale, &thresholds)?;
        Ok(SweepReport {
            config_id,
            scale,
            m_found: thresholds.len(),
            thresholds,
            scan_limit_d,
            exhaustive,
            c_exact: exhaustive.then(|| c_found.clone()),
            c_found,
        })
    }

    /// Crossing points `c_i = d_i / scale`.
    pub fn crossing_points(&self) -> Vec<Rational> {
        self.thresholds
            .iter()
            .map(|&d| Rational::new(d, self.scale).expect("scale is positive"))
            .collect()
    }
}

/// `Σ scale / d`.
pub(crate) fn reciprocal_sum(scale: u128, ds: &[u64]) -> Result<Rational> {
    let mut acc = Rational::zero();
    for &d in ds {
        acc = acc + Rational::new(scale, d)?;
    }
    Ok(acc)
}

pub fn sweep(cfg: &RatioConfig, mode: SweepMode) -> Result<SweepReport> {
    sweep_with(cfg, mode, &SweepOptions::default())
}

pub fn sweep_with(cfg: &RatioConfig, mode: SweepMode, opts: &SweepOptions) -> Result<SweepReport> {
    if let SweepMode::Bounded(d) = mode {
        if d < 2 {
            return Err(Error::Domain("bounded sweep needs D ≥ 2".into()));
        }
    }
    if opts.segment_len == 0 {
        return Err(Error::Domain("segment length must be positive".into()));
    }
    match cfg.prime_set() {
        Some(_) => sweep_prime_set(cfg, mode, opts),
        None => sweep_general(cfg, mode, opts),
    }
}

fn sweep_prime_set(cfg: &RatioConfig, mode: SweepMode, opts: &SweepOptions) -> Result<SweepReport> {
    let p = cfg.prime_set().expect("prime-set configuration");
    let k = cfg.k();
    let scale = cfg.a1();
    // the period in y is (k+1)Q; the window [(k+1)/k, (k+1)/k + (k+1)Q) holds d = 2..=(k+1)Q+1
    let period_end = scale.checked_add(1).and_then(|v| u64::try_from(v).ok());
    let events = BigUint::from(2 * (k + 1)) * p.phi_q();
    let (limit, exhaustive) = match mode {
        SweepMode::Exhaustive => match period_end {
            Some(end) if events <= BigUint::from(opts.event_budget) => (end, true),
            _ => {
                // partial: the D whose expected event count meets the budget
                let density = p.phi_q().to_f64().unwrap_or(f64::MAX) / p.q().to_f64().unwrap_or(f64::MAX);
                let d = (opts.event_budget as f64 / (2.0 * density)).max(2.0) as u64;
                (d.min(period_end.unwrap_or(u64::MAX).saturating_sub(1)), false)
            }
        },
        SweepMode::Bounded(d) => match period_end {
            Some(end) if d >= end => (end, true),
            _ => (d, false),
        },
    };
    // y·k must stay in u64 for the counters; floor checks use u128.
    if limit.checked_mul(k + 1).is_none() {
        return Err(Error::Budget(format!("scan limit {limit} too large")));
    }
    let wheel = CoprimeWheel::new(p.primes());
    let seg = opts.segment_len;
    let nseg = (limit - 1).div_ceil(seg);
    let results: Vec<Result<Vec<(i64, u64)>>> = (0..nseg)
        .into_par_iter()
        .map(|s| {
            let lo = 2 + s * seg;
            let hi = (lo + seg - 1).min(limit);
            scan_segment(cfg, &wheel, lo, hi, s == 0)
        })
        .collect();
    let mut thresholds = Vec::new();
    let mut top = 0i64;
    for r in results {
        for (level, d) in r? {
            if level > top {
                debug_assert_eq!(level, top + 1);
                thresholds.push(d);
                top = level;
            }
        }
    }
    SweepReport::new(cfg.config_id(), scale, thresholds, limit, exhaustive)
}

/// Levels newly exceeding the running maximum in `[lo, hi]`, as
/// `(level, first d)` pairs.
fn scan_segment(cfg: &RatioConfig, wheel: &CoprimeWheel, lo: u64, hi: u64, first: bool) -> Result<Vec<(i64, u64)>> {
    let k = cfg.k();
    let k1 = k + 1;
    let scale = cfg.a1();
    let floor_at = |d: u64| {
        g_floor_scaled(cfg, d as u128, scale)
            .ok_or_else(|| Error::Budget(format!("floor evaluation overflows at d = {d}")))
    };
    let start = lo - 1;
    let mut g = floor_at(start)?;
    let mut run_max = if first { 0 } else { g };
    // counters for ⌊k d/(k+1)⌋ and ⌊d/(k+1)⌋
    let mut b_idx = k * start / k1;
    let mut b_rem = k * start % k1;
    let mut c_idx = start / k1;
    let mut c_rem = start % k1;
    let mut out = Vec::new();
    for d in lo..=hi {
        if wheel.is_coprime(d) {
            g += 1;
        }
        b_rem += k;
        if b_rem >= k1 {
            b_rem -= k1;
            b_idx += 1;
            if wheel.is_coprime(b_idx) {
                g -= 1;
            }
        }
        c_rem += 1;
        if c_rem == k1 {
            c_rem = 0;
            c_idx += 1;
            if wheel.is_coprime(c_idx) {
                g -= 1;
            }
        }
        if g > run_max {
            for level in run_max + 1..=g {
                out.push((level, d));
            }
            run_max = g;
        }
    }
    let check = floor_at(hi)?;
    if check != g {
        return Err(Error::Integrity(format!(
            "counter sweep gives G = {g} at d = {hi} but floor evaluation gives {check}"
        )));
    }
    Ok(out)
}

/// General configurations: scan the grid `x = j / L`.
fn sweep_general(cfg: &RatioConfig, mode: SweepMode, opts: &SweepOptions) -> Result<SweepReport> {
    let l = cfg
        .lcm()
        .to_u64()
        .ok_or_else(|| Error::Budget(format!("L = {} too large", cfg.lcm())))?;
    let b1 = u64::try_from(cfg.b1()).map_err(|_| Error::Budget("b_1 too large".into()))?;
    let first = l.div_ceil(b1);
    let period_end = first + l - 1;
    let (limit, exhaustive) = match mode {
        SweepMode::Exhaustive if l <= opts.event_budget => (period_end, true),
        SweepMode::Exhaustive => (first + opts.event_budget, false),
        SweepMode::Bounded(d) if d >= period_end => (period_end, true),
        SweepMode::Bounded(d) => (d, false),
    };
    let mut thresholds = Vec::new();
    let mut top = 0i64;
    for j in first..=limit {
        let g = g_floor_scaled(cfg, j as u128, l as u128)
            .ok_or_else(|| Error::Budget("floor evaluation overflows".into()))?;
        while g > top {
            thresholds.push(j);
            top += 1;
        }
    }
    SweepReport::new(cfg.config_id(), l as u128, thresholds, limit, exhaustive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::PrimeSet;
    use crate::ratioconfig::{compile_prime_set, preset};

    fn compiled(k: u64, v: &[u64]) -> RatioConfig {
        compile_prime_set(k, &PrimeSet::new(v.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn presets_single_level() {
        let expect = [
            ("erdos", "2/3"),
            ("bachraoui", "6/7"),
            ("sainose", "2"),
            ("balliet4", "30/23"),
        ];
        for (name, c) in expect {
            let r = sweep(&preset(name).unwrap(), SweepMode::Exhaustive).unwrap();
            assert!(r.exhaustive);
            assert_eq!(r.m_found, 1, "{name}");
            assert_eq!(r.c_exact.unwrap().to_string(), c, "{name}");
        }
    }

    #[test]
    fn small_prime_sets() {
        let r = sweep(&compiled(3, &[2, 3]), SweepMode::Exhaustive).unwrap();
        assert_eq!(r.thresholds, vec![13]);
        assert_eq!(r.c_exact.unwrap().to_string(), "24/13");
        let r = sweep(&compiled(5, &[2, 3, 5]), SweepMode::Exhaustive).unwrap();
        assert_eq!(r.thresholds, vec![13, 49]);
        assert_eq!(r.c_exact.unwrap().to_string(), "11160/637");
        let r = sweep(&compiled(5, &[2, 3, 5, 13]), SweepMode::Exhaustive).unwrap();
        assert_eq!(r.thresholds, vec![19, 49, 1309]);
    }

    #[test]
    fn segment_length_does_not_matter() {
        let cfg = compiled(5, &[2, 3, 5, 13]);
        let base = sweep(&cfg, SweepMode::Exhaustive).unwrap();
        for seg in [1, 7, 64, 1000] {
            let opts = SweepOptions {
                segment_len: seg,
                ..SweepOptions::default()
            };
            assert_eq!(sweep_with(&cfg, SweepMode::Exhaustive, &opts).unwrap(), base);
        }
    }

    #[test]
    fn bounded_prefix() {
        let cfg = compiled(5, &[2, 3, 5, 13]);
        let r = sweep(&cfg, SweepMode::Bounded(100)).unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.thresholds, vec![19, 49]);
        assert_eq!(r.scan_limit_d, 100);
        assert!(r.c_exact.is_none());
        assert!(sweep(&cfg, SweepMode::Bounded(1)).is_err());
    }

    #[test]
    fn exhaustive_over_budget_is_partial() {
        let cfg = compiled(5, &[2, 3, 5, 13]);
        let opts = SweepOptions {
            event_budget: 100,
            ..SweepOptions::default()
        };
        let r = sweep_with(&cfg, SweepMode::Exhaustive, &opts).unwrap();
        assert!(!r.exhaustive);
        assert!(r.scan_limit_d >= 2);
    }
}
