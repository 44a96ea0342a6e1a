//! Event-merge sweep in indicator form, used to re-derive thresholds
//! independently of the segmented counter sweep.
//!
//! With `z = k(k+1)Q x`, each `u` coprime to `Q` contributes a `+1` jump at
//! `z = k u`, and `−1` jumps at `z = (k+1) u` and `z = k(k+1) u`. The three
//! progressions are merged in ascending `z`; jumps at equal `z` are applied
//! together before looking for a new maximum.

use super::CoprimeWheel;
use crate::numtheory::PrimeSet;
use crate::{Error, Result};

struct Stream<'a> {
    wheel: &'a CoprimeWheel,
    u: u64,
    mult: u64,
    weight: i64,
}

impl Stream<'_> {
    fn pos(&self) -> u64 {
        self.u * self.mult
    }

    fn advance(&mut self) {
        self.u = self.wheel.next_coprime(self.u + 1);
    }
}

/// Thresholds `d ≤ limit` of the compiled `(k, P)` configuration.
pub fn sweep_events(k: u64, p: &PrimeSet, limit: u64) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let z_max = limit
        .checked_mul(k)
        .ok_or_else(|| Error::Budget("event coordinate overflows".into()))?;
    if z_max.checked_mul(k + 1).is_none() {
        return Err(Error::Budget("event coordinate overflows".into()));
    }
    let wheel = CoprimeWheel::new(p.primes());
    let mut streams = [
        Stream { wheel: &wheel, u: 1, mult: k, weight: 1 },
        Stream { wheel: &wheel, u: 1, mult: k + 1, weight: -1 },
        Stream { wheel: &wheel, u: 1, mult: k * (k + 1), weight: -1 },
    ];
    let start = k + 1; // z of x = 1/b_1
    let mut g = 0i64;
    let mut top = 0i64;
    let mut out = Vec::new();
    loop {
        let z = streams.iter().map(Stream::pos).min().expect("three streams");
        if z > z_max {
            break;
        }
        for s in streams.iter_mut() {
            if s.pos() == z {
                g += s.weight;
                s.advance();
            }
        }
        if z >= start && g > top {
            if z % k != 0 {
                return Err(Error::Integrity(format!(
                    "G reached a new level at non-integral y = {z}/{k}"
                )));
            }
            for _ in top..g {
                out.push(z / k);
            }
            top = g;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let p = PrimeSet::new([2, 3, 5]).unwrap();
        assert_eq!(sweep_events(5, &p, 181).unwrap(), vec![13, 49]);
        let p = PrimeSet::new([2, 3]).unwrap();
        assert_eq!(sweep_events(3, &p, 25).unwrap(), vec![13]);
    }
}
