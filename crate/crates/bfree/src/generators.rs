//! Named families of `B` materialized as prefixes with a certified tail.
//!
//! A generator with cutoff `N` lists every element `b <= N` and records
//! `complete_below = N`. The tail bound covers `sum_{p^2 > N} 1/p^2`: primes
//! up to a sieve limit `M` are summed with upward rounding, and the primes
//! beyond `M` contribute less than `sum_{k > M} 1/k^2 < 1/M`.

use std::fmt;
use std::str::FromStr;

use bfree_core::{BSet, BSetError, Interval};

const MIN_SIEVE_LIMIT: u64 = 1_000_000;
/// Largest cutoff accepted; its square root bounds the sieve.
pub const MAX_CUTOFF: u64 = 1_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `{p^2 : p prime}`.
    PrimeSquares,
    /// `{2} + {p^2 : p odd prime}`.
    TwoPlusOddPrimeSquares,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::PrimeSquares => "prime-squares",
            Generator::TwoPlusOddPrimeSquares => "two-plus-odd-prime-squares",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prime-squares" => Ok(Generator::PrimeSquares),
            "two-plus-odd-prime-squares" => Ok(Generator::TwoPlusOddPrimeSquares),
            _ => Err(format!(
                "unknown generator {s:?}; expected prime-squares or two-plus-odd-prime-squares"
            )),
        }
    }
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Upper bound on `sum_{p prime, p^2 > cutoff} 1/p^2`.
pub fn prime_square_tail(cutoff: u64, primes: &[u64], sieve_limit: u64) -> f64 {
    let mut acc = Interval::ZERO;
    for &p in primes.iter().filter(|&&p| p * p > cutoff) {
        let sq = (p * p) as f64;
        acc = acc + Interval::ONE.div(&Interval::point(sq));
    }
    (acc + Interval::ONE.div(&Interval::point(sieve_limit as f64))).hi
}

/// The truncation of `gen` at `cutoff`.
pub fn generate(gen: Generator, cutoff: u64) -> Result<BSet, GeneratorError> {
    if cutoff < 2 {
        return Err(GeneratorError::CutoffTooSmall(cutoff));
    }
    if cutoff > MAX_CUTOFF {
        return Err(GeneratorError::CutoffTooLarge(cutoff));
    }
    let root = cutoff.isqrt();
    let limit = root.max(MIN_SIEVE_LIMIT);
    let primes = primes_up_to(limit);
    let mut elements: Vec<u64> = primes
        .iter()
        .take_while(|&&p| p <= root)
        .map(|&p| p * p)
        .collect();
    let mut tail = prime_square_tail(cutoff, &primes, limit);
    if gen == Generator::TwoPlusOddPrimeSquares {
        // 4 is replaced by 2, which is always listed.
        if elements.first() == Some(&4) {
            elements.remove(0);
        } else {
            // 4 > cutoff only when cutoff < 4: drop 1/4 from the tail.
            tail = (Interval::point(tail) - Interval::point(0.25)).hi.max(0.0);
        }
        elements.insert(0, 2);
    }
    Ok(BSet::validate(elements, tail, Some(cutoff))?)
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("cutoff {0} is below 2")]
    CutoffTooSmall(u64),
    #[error("cutoff {0} exceeds the supported maximum")]
    CutoffTooLarge(u64),
    #[error(transparent)]
    Invalid(#[from] BSetError),
}
