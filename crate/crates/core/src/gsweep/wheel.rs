/// Coprimality test against `Q = ∏ P`: a residue table for the leading
/// primes plus trial division by the rest.
#[derive(Clone, Debug)]
pub struct CoprimeWheel {
    modulus: u64,
    table: Vec<bool>,
    rest: Vec<u64>,
}

const MAX_TABLE: u64 = 1 << 22;

impl CoprimeWheel {
    pub fn new(primes: &[u64]) -> Self {
        let mut modulus = 1u64;
        let mut wheel_primes = Vec::new();
        let mut rest = Vec::new();
        for &p in primes {
            if rest.is_empty() && modulus.saturating_mul(p) <= MAX_TABLE {
                modulus *= p;
                wheel_primes.push(p);
            } else {
                rest.push(p);
            }
        }
        let table = (0..modulus)
            .map(|r| wheel_primes.iter().all(|&p| r % p != 0))
            .collect();
        CoprimeWheel {
            modulus,
            table,
            rest,
        }
    }

    #[inline]
    pub fn is_coprime(&self, n: u64) -> bool {
        self.table[(n % self.modulus) as usize] && self.rest.iter().all(|&p| !n.is_multiple_of(p))
    }

    /// Smallest coprime integer `≥ n`.
    pub fn next_coprime(&self, mut n: u64) -> u64 {
        while !self.is_coprime(n) {
            n += 1;
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_gcd() {
        let primes = [2, 3, 5, 7, 11, 13, 31, 43];
        let w = CoprimeWheel::new(&primes);
        for n in 0..100_000u64 {
            let want = primes.iter().all(|&p| n % p != 0);
            assert_eq!(w.is_coprime(n), want, "n = {n}");
        }
        assert_eq!(w.next_coprime(30), 37);
    }
}
