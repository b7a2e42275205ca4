//! Closed intervals of `f64` with directed rounding.
//!
//! Sums, products and quotients use error-free transforms (two-sum and
//! fused multiply-add residuals) to decide the rounding direction, so an
//! operation whose result is exactly representable stays degenerate and an
//! inexact one is widened by exactly one ulp on the side where the true
//! value lies. Transcendental functions are widened by two ulps unless the
//! result is known to be exact.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// A closed interval `[lo, hi]` with finite endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
fn settle(value: f64, err: f64, up: bool) -> f64 {
    if up {
        if err > 0.0 {
            value.next_up()
        } else {
            value
        }
    } else if err < 0.0 {
        value.next_down()
    } else {
        value
    }
}

pub(crate) fn add_dir(a: f64, b: f64, up: bool) -> f64 {
    let s = a + b;
    settle(s, two_sum_err(a, b, s), up)
}

pub(crate) fn mul_dir(a: f64, b: f64, up: bool) -> f64 {
    let p = a * b;
    settle(p, libm::fma(a, b, -p), up)
}

pub(crate) fn div_dir(a: f64, b: f64, up: bool) -> f64 {
    let q = a / b;
    // a - q*b has the sign of (a/b - q) times the sign of b.
    let r = libm::fma(-q, b, a);
    let err = if b > 0.0 { r } else { -r };
    settle(q, err, up)
}

fn widen2(x: f64) -> (f64, f64) {
    (x.next_down().next_down(), x.next_up().next_up())
}

fn is_power_of_two(x: f64) -> bool {
    x > 0.0 && x.is_normal() && (x.to_bits() & ((1u64 << 52) - 1)) == 0
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]`. Panics if the endpoints are not finite or out of order.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(
            lo.is_finite() && hi.is_finite() && lo <= hi,
            "invalid interval [{lo}, {hi}]"
        );
        Interval { lo, hi }
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Self> {
        (lo.is_finite() && hi.is_finite() && lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Interval::new(x, x)
    }

    /// The smallest interval around `x` guaranteed to contain a real that
    /// `x` approximates to within half an ulp.
    pub fn around(x: f64) -> Self {
        Interval::new(x.next_down(), x.next_up())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn widen(&self, by: f64) -> Interval {
        Interval::new(add_dir(self.lo, -by, false), add_dir(self.hi, by, true))
    }

    /// Magnitude bound `max(|lo|, |hi|)`.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn clamp_lo(&self, floor: f64) -> Interval {
        Interval::new(self.lo.max(floor), self.hi.max(floor))
    }

    pub fn clamp_hi(&self, ceil: f64) -> Interval {
        Interval::new(self.lo.min(ceil), self.hi.min(ceil))
    }

    pub fn scale(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }

    pub fn div(&self, rhs: &Interval) -> Interval {
        assert!(
            rhs.lo > 0.0 || rhs.hi < 0.0,
            "division by an interval containing zero"
        );
        let c = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = c
            .iter()
            .map(|&(a, b)| div_dir(a, b, false))
            .fold(f64::INFINITY, f64::min);
        let hi = c
            .iter()
            .map(|&(a, b)| div_dir(a, b, true))
            .fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }

    pub fn powi(&self, k: u32) -> Interval {
        let mut acc = Interval::ONE;
        for _ in 0..k {
            acc = acc * *self;
        }
        acc
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    /// Base-2 exponential, monotone.
    pub fn exp2(&self) -> Interval {
        let f = |x: f64, up: bool| {
            if x == libm::trunc(x) && x.abs() < 1000.0 {
                libm::exp2(x)
            } else {
                let (lo, hi) = widen2(libm::exp2(x));
                if up {
                    hi
                } else {
                    lo.max(0.0)
                }
            }
        };
        Interval::new(f(self.lo, false), f(self.hi, true))
    }

    /// Base-2 logarithm. Requires `lo > 0`.
    pub fn log2(&self) -> Interval {
        assert!(self.lo > 0.0, "log2 of a nonpositive interval");
        let f = |x: f64, up: bool| {
            if is_power_of_two(x) {
                libm::log2(x)
            } else {
                let (lo, hi) = widen2(libm::log2(x));
                if up {
                    hi
                } else {
                    lo
                }
            }
        };
        Interval::new(f(self.lo, false), f(self.hi, true))
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(add_dir(self.lo, rhs.lo, false), add_dir(self.hi, rhs.hi, true))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self.lo >= 0.0 && rhs.lo >= 0.0 {
            return Interval::new(
                mul_dir(self.lo, rhs.lo, false),
                mul_dir(self.hi, rhs.hi, true),
            );
        }
        let c = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let lo = c
            .iter()
            .map(|&(a, b)| mul_dir(a, b, false))
            .fold(f64::INFINITY, f64::min);
        let hi = c
            .iter()
            .map(|&(a, b)| mul_dir(a, b, true))
            .fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Binary entropy in bits, zero at the endpoints.
pub fn binary_entropy(p: f64) -> Interval {
    if p <= 0.0 || p >= 1.0 {
        return Interval::ZERO;
    }
    let p_i = Interval::point(p);
    let q_i = Interval::point(1.0) - p_i;
    let term = |x: Interval| {
        // -x log2 x with x a (nearly) point interval in (0, 1).
        -(x * x.log2())
    };
    if q_i.lo <= 0.0 {
        return term(p_i).clamp_lo(0.0);
    }
    (term(p_i) + term(q_i)).clamp_lo(0.0)
}

/// `log2(2^x + 2^y)` evaluated without overflow.
pub fn log2_sum_exp2(x: f64, y: f64) -> Interval {
    let (m, other) = if x >= y { (x, y) } else { (y, x) };
    let gap = Interval::point(other) - Interval::point(m);
    Interval::point(m) + (Interval::ONE + gap.exp2()).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_operations_stay_degenerate() {
        let a = Interval::point(0.5) + Interval::point(0.25);
        assert_eq!(a, Interval::point(0.75));
        let b = Interval::point(3.0) * Interval::point(0.125);
        assert!(b.is_degenerate());
        assert_eq!(Interval::point(1.0).log2(), Interval::ZERO);
        assert_eq!(Interval::point(3.0).exp2(), Interval::point(8.0));
    }

    #[test]
    fn inexact_operations_enclose() {
        let third = Interval::point(1.0).div(&Interval::point(3.0));
        assert!(!third.is_degenerate());
        assert!(third.width() <= f64::EPSILON);
        let s = Interval::point(0.1) + Interval::point(0.2);
        // 0.1 + 0.2 as reals (of the doubles) lies in s.
        assert!(s.lo <= 0.30000000000000004 && s.hi >= 0.3);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5), Interval::ONE);
        assert_eq!(binary_entropy(0.0), Interval::ZERO);
        assert_eq!(binary_entropy(1.0), Interval::ZERO);
        let h = binary_entropy(0.25);
        let expect = 2.0 - 0.75 * libm::log2(3.0);
        assert!(h.widen(1e-15).contains(expect));
    }

    #[test]
    fn softplus_is_stable() {
        let v = log2_sum_exp2(2000.0, 2000.0);
        assert!(v.contains(2001.0));
        assert_eq!(log2_sum_exp2(0.0, 0.0), Interval::ONE);
    }
}
