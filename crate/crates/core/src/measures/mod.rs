//! Cylinder measures: Mirsky, Bernoulli and their multiplicative
//! convolution.
//!
//! Every evaluator returns an [`Interval`] containing `mu([C])` for the
//! cylinder of `C` placed at coordinate 0. For an exactly finite `B` the
//! Mirsky value is an exact rational and is returned as the degenerate
//! interval at its nearest double.
//!
//! Bernoulli masses follow the convention `B_{q,1-q}([0]) = q`: `q` is the
//! mass of the symbol `0`. The equilibrium parameter `p` of the thermo module
//! is passed in the place of `q`.

use core::cmp::Ordering;

use thiserror::Error;

use crate::interval::{add_dir, Interval};
use crate::rational::ratio_to_f64;
use crate::thermo::Potential2;
use crate::words::{Word, WordError};

mod convolution;
mod mirsky;

pub use convolution::{convolve_bruteforce_oracle, convolve_eval, ConvolvedMeasure, BRUTEFORCE_MAX_LEN};
pub use mirsky::{
    mirsky_crt_oracle, mirsky_eval, mirsky_eval_with, MirskyMeasure, MirskyMethod, AUTO_SWITCH_ZEROS, CRT_MAX_PERIOD,
    INCL_EXCL_MAX_ZEROS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("word has {zeros} zeros, more than the supported {max}")]
    TooManyZeros { zeros: usize, max: usize },
    #[error("period {0} exceeds the oracle limit")]
    PeriodTooLarge(u128),
    #[error("the oracle needs an exactly finite B")]
    NotExactlyFinite,
    #[error("q = {0} is outside [0, 1]")]
    QOutOfRange(f64),
    #[error("residue state budget of {0} states exceeded")]
    StateBudgetExceeded(usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// An evaluator of cylinder masses.
pub trait CylinderMeasure {
    fn eval(&self, c: &Word) -> Result<Interval, MeasureError>;
}

impl<M: CylinderMeasure + ?Sized> CylinderMeasure for &M {
    fn eval(&self, c: &Word) -> Result<Interval, MeasureError> {
        (**self).eval(c)
    }
}

pub(crate) fn check_q(q: f64) -> Result<(), MeasureError> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(MeasureError::QOutOfRange(q))
    }
}

/// Enclosure of `1 - q`.
pub(crate) fn one_minus(q: f64) -> Interval {
    Interval::new(add_dir(1.0, -q, false), add_dir(1.0, -q, true))
}

/// `q^zeros * (1 - q)^ones`.
pub fn bernoulli_eval(q: f64, c: &Word) -> Result<f64, MeasureError> {
    check_q(q)?;
    let zeros = c.zeros_count() as i32;
    let ones = c.ones_count() as i32;
    Ok(libm::pow(q, zeros as f64) * libm::pow(1.0 - q, ones as f64))
}

/// The Bernoulli measure with `B([0]) = q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernoulliMeasure {
    q: f64,
}

impl BernoulliMeasure {
    pub fn new(q: f64) -> Result<BernoulliMeasure, MeasureError> {
        check_q(q)?;
        Ok(BernoulliMeasure { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl CylinderMeasure for BernoulliMeasure {
    fn eval(&self, c: &Word) -> Result<Interval, MeasureError> {
        let zeros = c.zeros_count() as u32;
        let ones = c.ones_count() as u32;
        Ok(Interval::point(self.q).powi(zeros) * one_minus(self.q).powi(ones))
    }
}

/// `sum_{ab} mu([ab]) v(a, b)` over the four cylinders of length two, for a
/// probability measure `mu`. Total mass one gives
/// `v(0, 0) + sum_{ab != 00} mu([ab]) (v(a, b) - v(0, 0))`, which is exact
/// for constants and keeps the width of the cylinder enclosures from
/// multiplying the full values.
pub fn integral_phi<M: CylinderMeasure>(measure: &M, phi: &Potential2) -> Result<Interval, MeasureError> {
    let base = Interval::point(phi.value(false, false));
    let mut acc = base;
    for (a, b) in [(false, true), (true, false), (true, true)] {
        let mass = measure.eval(&Word::from_bits(&[a, b]))?;
        acc = acc + mass * (Interval::point(phi.value(a, b)) - base);
    }
    Ok(acc)
}

/// Whether the rational `num / den` lies in `iv`. A degenerate interval
/// stands for an exact rational rounded to nearest, so it contains `num/den`
/// when that rounding matches.
pub fn contains_ratio(iv: &Interval, num: u128, den: u128) -> bool {
    let (x, order) = ratio_to_f64(num, den);
    if iv.is_degenerate() {
        return iv.lo == x;
    }
    let above_lo = iv.lo < x || (iv.lo == x && order != Ordering::Less);
    let below_hi = x < iv.hi || (x == iv.hi && order != Ordering::Greater);
    above_lo && below_hi
}
