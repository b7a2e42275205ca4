//! The odometer `Omega = prod Z/bZ` with `T omega = omega + 1`, the freeness
//! map to `{0, 1}^Z`, and Monte Carlo estimates of Mirsky cylinder masses.
//!
//! Sample `i` of a run with seed `s` is drawn from the ChaCha8 stream `i` of
//! the generator seeded with `s`, so estimates do not depend on how the
//! samples are split between workers.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bset::BSet;
use crate::words::{Word, WordError};

/// A point of the truncated odometer: one residue per listed element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OdometerPoint {
    residues: Vec<u64>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum OdometerError {
    #[error("expected {expected} residues, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("residue {residue} is not reduced mod {modulus}")]
    NotReduced { residue: u64, modulus: u64 },
    #[error("at least {min} samples are needed, got {got}")]
    TooFewSamples { min: u64, got: u64 },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Fewest samples accepted by [`mc_estimate_cylinder`].
pub const MIN_SAMPLES: u64 = 100;

impl OdometerPoint {
    pub fn new(bset: &BSet, residues: Vec<u64>) -> Result<OdometerPoint, OdometerError> {
        let el = bset.elements();
        if el.len() != residues.len() {
            return Err(OdometerError::WrongLength {
                expected: el.len(),
                got: residues.len(),
            });
        }
        if let Some((&r, &b)) = residues.iter().zip(el).find(|(&r, &b)| r >= b) {
            return Err(OdometerError::NotReduced { residue: r, modulus: b });
        }
        Ok(OdometerPoint { residues })
    }

    pub fn zero(bset: &BSet) -> OdometerPoint {
        OdometerPoint {
            residues: alloc::vec![0; bset.elements().len()],
        }
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

/// `T^t omega`, coordinatewise `(omega_k + t) mod b_k`.
pub fn advance(bset: &BSet, omega: &OdometerPoint, t: i64) -> OdometerPoint {
    let residues = omega
        .residues
        .iter()
        .zip(bset.elements())
        .map(|(&r, &b)| ((r as i128 + t as i128).rem_euclid(b as i128)) as u64)
        .collect();
    OdometerPoint { residues }
}

/// Bits of the freeness map on `[a, b]`: position `n` is 1 iff
/// `omega_k + n != 0 mod b_k` for every listed `b_k`.
pub fn phi_window(bset: &BSet, omega: &OdometerPoint, a: i64, b: i64) -> Result<Word, OdometerError> {
    if a > b {
        return Err(WordError::InvalidWindow(a, b).into());
    }
    let len = (b - a + 1) as usize;
    let mut w = Word::ones(len);
    for (&r, &m) in omega.residues.iter().zip(bset.elements()) {
        // First n >= a with r + n = 0 mod m.
        let first = (-(r as i128) - a as i128).rem_euclid(m as i128) as usize;
        let mut i = first;
        while i < len {
            w.set(i, false);
            i += m as usize;
        }
    }
    Ok(w)
}

/// A Haar-distributed point: independent uniform residues.
pub fn haar_sample<R: Rng + ?Sized>(bset: &BSet, rng: &mut R) -> OdometerPoint {
    OdometerPoint {
        residues: bset.elements().iter().map(|&b| rng.random_range(0..b)).collect(),
    }
}

/// Generator for sample `index` of the run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Number of samples `i` in `range` whose window on `[0, |C| - 1]` equals `C`.
pub fn mc_count(bset: &BSet, c: &Word, seed: u64, range: core::ops::Range<u64>) -> Result<u64, OdometerError> {
    if c.is_empty() {
        return Err(WordError::Empty.into());
    }
    let last = c.len() as i64 - 1;
    let mut hits = 0;
    for i in range {
        let omega = haar_sample(bset, &mut sample_rng(seed, i));
        if phi_window(bset, &omega, 0, last)? == *c {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Fraction of Haar samples whose window at 0 is `C`, with
/// `stderr = sqrt(mean (1 - mean) / samples)`.
pub fn mc_estimate_cylinder(bset: &BSet, c: &Word, samples: u64, seed: u64) -> Result<McEstimate, OdometerError> {
    if samples < MIN_SAMPLES {
        return Err(OdometerError::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    let hits = mc_count(bset, c, seed, 0..samples)?;
    Ok(estimate_from_count(hits, samples, seed))
}

/// Builds the estimate from a total hit count, e.g. after summing
/// [`mc_count`] over disjoint ranges.
pub fn estimate_from_count(hits: u64, samples: u64, seed: u64) -> McEstimate {
    let mean = hits as f64 / samples as f64;
    McEstimate {
        mean,
        stderr: libm::sqrt(mean * (1.0 - mean) / samples as f64),
        samples,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::eta_window;
    use alloc::vec;

    #[test]
    fn advance_examples() {
        let b = BSet::finite(vec![2, 3]).unwrap();
        let z = OdometerPoint::zero(&b);
        assert_eq!(advance(&b, &z, 1).residues(), &[1, 1]);
        assert_eq!(advance(&b, &z, 6), z);
        let w = OdometerPoint::new(&b, vec![1, 2]).unwrap();
        assert_eq!(advance(&b, &advance(&b, &w, -1), 1), w);
        assert_eq!(advance(&b, &advance(&b, &w, 4), 7), advance(&b, &w, 11));
        assert!(OdometerPoint::new(&b, vec![2, 0]).is_err());
    }

    #[test]
    fn window_at_zero_is_eta() {
        let b = BSet::finite(vec![2, 9, 25]).unwrap();
        let z = OdometerPoint::zero(&b);
        for (lo, hi) in [(1, 30), (-20, 20), (0, 0)] {
            assert_eq!(phi_window(&b, &z, lo, hi).unwrap(), eta_window(&b, lo, hi).unwrap().word);
        }
    }

    #[test]
    fn equivariance() {
        let b = BSet::finite(vec![2, 9, 25]).unwrap();
        let mut rng = sample_rng(3, 0);
        for _ in 0..100 {
            let w = haar_sample(&b, &mut rng);
            let moved = advance(&b, &w, 1);
            assert_eq!(phi_window(&b, &moved, -5, 20).unwrap(), phi_window(&b, &w, -4, 21).unwrap());
        }
    }

    #[test]
    fn impossible_cylinder() {
        let b = BSet::finite(vec![2, 3]).unwrap();
        let e = mc_estimate_cylinder(&b, &"11".parse().unwrap(), 1000, 7).unwrap();
        assert_eq!(e.mean, 0.0);
        assert_eq!(e.stderr, 0.0);
        assert!(mc_estimate_cylinder(&b, &"1".parse().unwrap(), 10, 7).is_err());
    }

    #[test]
    fn split_runs_agree() {
        let b = BSet::finite(vec![2, 3, 5]).unwrap();
        let c: Word = "10".parse().unwrap();
        let whole = mc_count(&b, &c, 11, 0..2000).unwrap();
        let parts = mc_count(&b, &c, 11, 0..700).unwrap() + mc_count(&b, &c, 11, 700..2000).unwrap();
        assert_eq!(whole, parts);
    }
}
