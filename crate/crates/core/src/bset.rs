//! Truncations of a pairwise coprime set `B` with a certified tail.
//!
//! A [`BSet`] is the known prefix `b_1 < ... < b_K` of `B` plus an upper
//! bound on `sum 1/b` over the unknown remainder and a threshold below which
//! the prefix is known to be complete. All densities derived from it are
//! returned as intervals that contain the value for the full set.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::interval::{add_dir, mul_dir, Interval};
use crate::rational::{ratio_enclosure, ratio_to_f64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BSetError {
    #[error("elements {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("element {0} is below 2")]
    ElementBelowTwo(u64),
    #[error("elements are not strictly ascending at {0} -> {1}")]
    NotAscending(u64, u64),
    #[error("tail bound {0} is not a finite nonnegative number")]
    InvalidTail(f64),
    #[error("a positive tail bound needs a finite completeness threshold")]
    MissingCompleteness,
    #[error("prefix length {k} exceeds the {len} known elements")]
    KTooLarge { k: usize, len: usize },
    #[error("window {n} exceeds the completeness threshold {complete_below}")]
    WindowExceedsCompleteness { n: u64, complete_below: u64 },
    #[error("window must be at least 2, got {0}")]
    WindowTooSmall(u64),
    #[error("product of the first {0} elements overflows 128 bits")]
    Overflow(usize),
}

/// A validated truncation of `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct BSet {
    elements: Vec<u64>,
    tail_bound: f64,
    complete_below: Option<u64>,
}

/// A product over the elements, either exact or enclosed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Product {
    Exact { num: u128, den: u128 },
    Approx(Interval),
}

impl Product {
    /// Enclosure of the product. For an exact value on an exactly finite set
    /// the nearest double is returned as a degenerate interval.
    pub(crate) fn value(&self, degenerate: bool) -> Interval {
        match *self {
            Product::Exact { num, den } if degenerate => Interval::point(ratio_to_f64(num, den).0),
            Product::Exact { num, den } => ratio_enclosure(num, den),
            Product::Approx(iv) => iv,
        }
    }
}

impl BSet {
    /// Checks the invariants and builds a `BSet`.
    ///
    /// A zero tail bound marks `B` as exactly finite, in which case the
    /// completeness threshold is normalized to infinity (`None`).
    pub fn validate(
        elements: Vec<u64>,
        tail_bound: f64,
        complete_below: Option<u64>,
    ) -> Result<BSet, BSetError> {
        if !(tail_bound.is_finite() && tail_bound >= 0.0) {
            return Err(BSetError::InvalidTail(tail_bound));
        }
        if let Some(&b) = elements.iter().find(|&&b| b < 2) {
            return Err(BSetError::ElementBelowTwo(b));
        }
        for w in elements.windows(2) {
            if w[0] >= w[1] {
                return Err(BSetError::NotAscending(w[0], w[1]));
            }
        }
        for (i, &a) in elements.iter().enumerate() {
            for &b in &elements[i + 1..] {
                if a.gcd(&b) != 1 {
                    return Err(BSetError::NotCoprime(a, b));
                }
            }
        }
        let complete_below = if tail_bound == 0.0 {
            None
        } else if complete_below.is_none() {
            return Err(BSetError::MissingCompleteness);
        } else {
            complete_below
        };
        Ok(BSet {
            elements,
            tail_bound,
            complete_below,
        })
    }

    /// An exactly finite set.
    pub fn finite(elements: Vec<u64>) -> Result<BSet, BSetError> {
        BSet::validate(elements, 0.0, None)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `None` means every element of `B` is listed.
    pub fn complete_below(&self) -> Option<u64> {
        self.complete_below
    }

    pub fn is_exactly_finite(&self) -> bool {
        self.tail_bound == 0.0
    }

    pub fn contains(&self, b: u64) -> bool {
        self.elements.binary_search(&b).is_ok()
    }

    /// Whether every element of `B` not exceeding `n` is listed.
    pub fn complete_up_to(&self, n: u64) -> bool {
        self.complete_below.is_none_or(|c| n <= c)
    }

    /// Product of all elements, if it fits in 128 bits.
    pub fn period(&self) -> Option<u128> {
        self.elements
            .iter()
            .try_fold(1u128, |acc, &b| acc.checked_mul(b as u128))
    }

    /// The exactly finite set of the first `k` elements.
    pub fn prefix(&self, k: usize) -> Result<BSet, BSetError> {
        if k > self.elements.len() {
            return Err(BSetError::KTooLarge {
                k,
                len: self.elements.len(),
            });
        }
        Ok(BSet {
            elements: self.elements[..k].to_vec(),
            tail_bound: 0.0,
            complete_below: None,
        })
    }

    /// `prod_b (b - occupied(b)) / b` over the listed elements.
    pub(crate) fn occupancy_product(&self, mut occupied: impl FnMut(u64) -> u64) -> Product {
        let mut num: Option<u128> = Some(1);
        let mut den: Option<u128> = Some(1);
        let mut approx = Interval::ONE;
        for &b in &self.elements {
            let t = occupied(b).min(b);
            if t == b {
                return Product::Exact { num: 0, den: 1 };
            }
            num = num.and_then(|n| n.checked_mul((b - t) as u128));
            den = den
                .and_then(|d| d.checked_mul(b as u128))
                .filter(|&d| d <= 1u128 << 127);
            let factor = Interval::point((b - t) as f64).div(&Interval::point(b as f64));
            approx = approx * factor;
        }
        match (num, den) {
            (Some(num), Some(den)) => Product::Exact { num, den },
            _ => Product::Approx(approx),
        }
    }

    /// Interval containing the density of `B`-free integers,
    /// `d = prod (1 - 1/b)`.
    pub fn free_density(&self) -> Interval {
        let finite = self.is_exactly_finite();
        let dk = self.occupancy_product(|_| 1).value(finite);
        if finite {
            return dk;
        }
        Interval::new(mul_dir(dk.lo, self.tail_keep(1), false), dk.hi)
    }

    /// Topological entropy (base 2) of the `B`-free subshift. Coincides with
    /// [`BSet::free_density`].
    pub fn topological_entropy(&self) -> Interval {
        self.free_density()
    }

    /// Exact density `1 - prod_{k<=K} (1 - 1/b_k)` of the multiples of the
    /// first `K` elements.
    pub fn mset_density(&self, k: usize) -> Result<Ratio<u128>, BSetError> {
        if k > self.elements.len() {
            return Err(BSetError::KTooLarge {
                k,
                len: self.elements.len(),
            });
        }
        let mut num = 1u128;
        let mut den = 1u128;
        for &b in &self.elements[..k] {
            num = num.checked_mul((b - 1) as u128).ok_or(BSetError::Overflow(k))?;
            den = den.checked_mul(b as u128).ok_or(BSetError::Overflow(k))?;
        }
        Ok(Ratio::new(den - num, den))
    }

    /// Enclosure of the multiples density of the first `k` elements; falls
    /// back to interval products when the exact rational overflows.
    pub fn mset_density_interval(&self, k: usize) -> Result<Interval, BSetError> {
        let pre = self.prefix(k)?;
        Ok(match pre.occupancy_product(|_| 1) {
            Product::Exact { num, den } => ratio_enclosure(den - num, den),
            Product::Approx(iv) => Interval::ONE - iv,
        })
    }

    /// `(1 / ln N) * sum_{a <= N, a in M_B} 1/a` using the listed elements.
    pub fn log_density_mset(&self, n: u64) -> Result<f64, BSetError> {
        if n < 2 {
            return Err(BSetError::WindowTooSmall(n));
        }
        if let Some(c) = self.complete_below {
            if n > c {
                return Err(BSetError::WindowExceedsCompleteness {
                    n,
                    complete_below: c,
                });
            }
        }
        let len = n as usize + 1;
        let mut multiple = vec![false; len];
        for &b in &self.elements {
            let mut m = b as usize;
            while m < len {
                multiple[m] = true;
                m += b as usize;
            }
        }
        // Kahan summation of the harmonic terms.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for (a, _) in multiple.iter().enumerate().filter(|(_, &m)| m) {
            let y = 1.0 / a as f64 - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok(sum / libm::log(n as f64))
    }

    /// Lower bound `max(0, 1 - count * tail)` on the probability that no tail
    /// element hits any of `count` given positions.
    pub(crate) fn tail_keep(&self, count: usize) -> f64 {
        let lost = mul_dir(self.tail_bound, count as f64, true);
        add_dir(1.0, -lost, false).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(BSet::finite(vec![2, 3, 5]).is_ok());
        assert_eq!(BSet::finite(vec![2, 4]), Err(BSetError::NotCoprime(2, 4)));
        assert_eq!(BSet::finite(vec![1, 3]), Err(BSetError::ElementBelowTwo(1)));
        assert_eq!(BSet::finite(vec![3, 2]), Err(BSetError::NotAscending(3, 2)));
        assert_eq!(
            BSet::validate(vec![2, 3], -0.1, None),
            Err(BSetError::InvalidTail(-0.1))
        );
        assert_eq!(
            BSet::validate(vec![2, 3], 0.1, None),
            Err(BSetError::MissingCompleteness)
        );
        let b = BSet::validate(vec![2, 9, 25, 49], 0.05, Some(120)).unwrap();
        assert_eq!(b.complete_below(), Some(120));
        let f = BSet::validate(vec![2, 3], 0.0, Some(10)).unwrap();
        assert_eq!(f.complete_below(), None);
    }

    #[test]
    fn free_density_examples() {
        let d = BSet::finite(vec![2, 3]).unwrap().free_density();
        assert_eq!(d, Interval::point(1.0 / 3.0));
        assert_eq!(BSet::finite(vec![2]).unwrap().free_density(), Interval::point(0.5));

        let b = BSet::validate(vec![2, 9, 25, 49], 0.05, Some(120)).unwrap();
        let dk = 0.5 * (8.0 / 9.0) * (24.0 / 25.0) * (48.0 / 49.0);
        let d = b.free_density();
        assert!((d.hi - dk).abs() <= 2.0 * f64::EPSILON * dk);
        assert!((d.lo - 0.95 * dk).abs() <= 4.0 * f64::EPSILON);
        assert_eq!(b.topological_entropy(), d);
    }

    #[test]
    fn mset_density_examples() {
        let b = BSet::finite(vec![2, 3]).unwrap();
        assert_eq!(b.mset_density(1).unwrap(), Ratio::new(1, 2));
        assert_eq!(b.mset_density(2).unwrap(), Ratio::new(2, 3));
        assert_eq!(
            b.mset_density(3),
            Err(BSetError::KTooLarge { k: 3, len: 2 })
        );
        let c = BSet::finite(vec![2, 9, 25]).unwrap();
        // Direct count of multiples of 2, 9 or 25 in one period of 450.
        let count = (0u128..450).filter(|r| r % 2 == 0 || r % 9 == 0 || r % 25 == 0).count();
        assert_eq!(c.mset_density(3).unwrap(), Ratio::new(count as u128, 450));
        assert_eq!(
            c.mset_density(3).unwrap(),
            Ratio::new(1, 1) - Ratio::new(8 * 24, 2 * 9 * 25)
        );
    }

    #[test]
    fn log_density_examples() {
        let two = BSet::finite(vec![2]).unwrap();
        assert!((two.log_density_mset(10_000).unwrap() - 0.5).abs() < 0.05);
        let six = BSet::finite(vec![2, 3]).unwrap();
        assert!((six.log_density_mset(100_000).unwrap() - 2.0 / 3.0).abs() < 0.05);
        let at_two = two.log_density_mset(2).unwrap();
        assert!((at_two - 0.5 / core::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(BSet::finite(vec![3]).unwrap().log_density_mset(2).unwrap(), 0.0);
        let partial = BSet::validate(vec![2], 0.1, Some(100)).unwrap();
        assert_eq!(
            partial.log_density_mset(101),
            Err(BSetError::WindowExceedsCompleteness { n: 101, complete_below: 100 })
        );
    }

    #[test]
    fn davenport_erdos_increments() {
        let b = BSet::finite(vec![2, 9, 25, 49, 121, 169]).unwrap();
        for k in 0..b.elements().len() {
            let cur = b.mset_density(k).unwrap();
            let next = b.mset_density(k + 1).unwrap();
            assert!(next >= cur);
            assert!(next - cur <= Ratio::new(1, b.elements()[k] as u128));
            let free = b.prefix(k + 1).unwrap().free_density();
            assert_eq!(crate::rational::to_f64(&(Ratio::new(1, 1) - next)), free.hi);
        }
    }
}
