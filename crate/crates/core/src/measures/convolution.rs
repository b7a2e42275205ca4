//! The multiplicative convolution `nu * B_{q,1-q}`: the law of `x * y`
//! (coordinatewise product) with `x ~ nu` on `X_B` and `y` an independent
//! Bernoulli mask with `P(y_i = 0) = q`.
//!
//! A cylinder `C` is reached from `C' >= C` exactly when the mask keeps the
//! ones of `C` and kills the other ones of `C'`, so
//!
//! `kappa(C) = sum_{C <= C' in L(X)} nu(C') q^(#1 C' - #1 C) (1 - q)^(#1 C)`.

use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::bset::BSet;
use crate::interval::Interval;
use crate::measures::{check_q, one_minus, CylinderMeasure, MeasureError, MirskyMeasure};
use crate::words::{for_each_superset, is_admissible, Word, WordError};
use crate::Budget;

/// Longest word accepted by [`convolve_bruteforce_oracle`].
pub const BRUTEFORCE_MAX_LEN: usize = 12;

/// Enclosure of `(base * B_{q,1-q})([C])`, summing over the admissible
/// words dominating `C`. Endpoint values of `q` use `0^0 = 1`.
pub fn convolve_eval<M: CylinderMeasure>(
    base: &M,
    bset: &BSet,
    q: f64,
    c: &Word,
    budget: Budget,
) -> Result<Interval, MeasureError> {
    check_q(q)?;
    let n = c.len();
    let ones = c.ones_count();
    let q_pow: Vec<Interval> = (0..=n as u32).map(|k| Interval::point(q).powi(k)).collect();
    let keep = one_minus(q).powi(ones as u32);
    let mut acc = Interval::ZERO;
    let mut failure = None;
    for_each_superset(c, bset, budget, |leaf| {
        match base.eval(&Word::from_u128(leaf.bits, n)) {
            Ok(mass) => {
                acc = acc + mass * q_pow[leaf.ones as usize - ones] * keep;
                ControlFlow::Continue(())
            }
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(acc.clamp_hi(1.0)),
    }
}

/// Direct double sum over admissible `C'` and masks `D` with `C' * D = C`
/// of `base(C') q^(|C| - #1 D) (1 - q)^(#1 D)`. Needs an exactly finite `B`.
pub fn convolve_bruteforce_oracle<M: CylinderMeasure>(
    base: &M,
    bset: &BSet,
    q: f64,
    c: &Word,
) -> Result<f64, MeasureError> {
    check_q(q)?;
    if !bset.is_exactly_finite() {
        return Err(MeasureError::NotExactlyFinite);
    }
    let n = c.len();
    if n > BRUTEFORCE_MAX_LEN {
        return Err(WordError::WordTooLong {
            len: n,
            max: BRUTEFORCE_MAX_LEN,
        }
        .into());
    }
    if n == 0 {
        return Err(WordError::Empty.into());
    }
    let target = c.to_u128().unwrap_or(0);
    let mut total = 0.0;
    for cp in 0u128..1 << n {
        let word = Word::from_u128(cp, n);
        if !is_admissible(&word, bset) {
            continue;
        }
        let mass = base.eval(&word)?.mid();
        for d in 0u128..1 << n {
            if cp & d == target {
                let kept = d.count_ones() as f64;
                total += mass * libm::pow(q, n as f64 - kept) * libm::pow(1.0 - q, kept);
            }
        }
    }
    Ok(total)
}

/// `base * B_{q,1-q}` for a measure `base` on `X_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolvedMeasure<M> {
    base: M,
    bset: BSet,
    q: f64,
    budget: Budget,
}

impl<M: CylinderMeasure> ConvolvedMeasure<M> {
    pub fn new(base: M, bset: BSet, q: f64) -> Result<ConvolvedMeasure<M>, MeasureError> {
        check_q(q)?;
        Ok(ConvolvedMeasure {
            base,
            bset,
            q,
            budget: Budget::default(),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn base(&self) -> &M {
        &self.base
    }
}

impl ConvolvedMeasure<MirskyMeasure> {
    /// `nu_eta * B_{q,1-q}`.
    pub fn mirsky(bset: BSet, q: f64) -> Result<Self, MeasureError> {
        ConvolvedMeasure::new(MirskyMeasure::new(bset.clone()), bset, q)
    }
}

impl<M: CylinderMeasure> CylinderMeasure for ConvolvedMeasure<M> {
    fn eval(&self, c: &Word) -> Result<Interval, MeasureError> {
        convolve_eval(&self.base, &self.bset, self.q, c, self.budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::integral_phi;
    use crate::thermo::Potential2;
    use alloc::vec;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn pair_cylinders_with_two_in_b() {
        let bset = BSet::validate(vec![2, 9, 25, 49], 0.05, Some(50)).unwrap();
        let d = bset.free_density();
        for q in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let k = ConvolvedMeasure::mirsky(bset.clone(), q).unwrap();
            let k00 = k.eval(&w("00")).unwrap();
            let k01 = k.eval(&w("01")).unwrap();
            let lo = 1.0 - 2.0 * d.hi + 2.0 * d.lo * q;
            let hi = 1.0 - 2.0 * d.lo + 2.0 * d.hi * q;
            assert!(k00.lo <= hi + 1e-15 && k00.hi >= lo - 1e-15, "q={q} {k00}");
            assert!(k01.lo <= d.hi * (1.0 - q) + 1e-15 && k01.hi >= d.lo * (1.0 - q) - 1e-15);
            assert_eq!(k.eval(&w("11")).unwrap(), Interval::ZERO);
        }
    }

    #[test]
    fn endpoints() {
        let bset = BSet::finite(vec![2, 3]).unwrap();
        let nu = MirskyMeasure::new(bset.clone());
        let k0 = ConvolvedMeasure::mirsky(bset.clone(), 0.0).unwrap();
        let k1 = ConvolvedMeasure::mirsky(bset.clone(), 1.0).unwrap();
        for s in ["0", "1", "00", "01", "10", "000", "010", "101", "100"] {
            assert_eq!(k0.eval(&w(s)).unwrap(), nu.eval(&w(s)).unwrap(), "{s}");
        }
        let all = k1.eval(&w("000")).unwrap();
        assert!(all.contains(1.0) && all.width() < 1e-15);
        assert_eq!(k1.eval(&w("010")).unwrap(), Interval::ZERO);
    }

    #[test]
    fn bruteforce_agreement() {
        let bset = BSet::finite(vec![2, 3]).unwrap();
        let nu = MirskyMeasure::new(bset.clone());
        for q in [0.25, 0.5, 0.75] {
            for n in 1..=6usize {
                for m in 0u128..1 << n {
                    let c = Word::from_u128(m, n);
                    let fast = convolve_eval(&nu, &bset, q, &c, Budget::default()).unwrap();
                    let slow = convolve_bruteforce_oracle(&nu, &bset, q, &c).unwrap();
                    assert!((fast.mid() - slow).abs() <= 1e-12 * slow.abs().max(1e-300), "{c} q={q}");
                }
            }
        }
        assert_eq!(convolve_bruteforce_oracle(&nu, &bset, 0.5, &w("11")).unwrap(), 0.0);
    }

    #[test]
    fn half_mask_formula() {
        // At q = 1/2 every superset C' contributes nu(C') 2^(-#1 C').
        let bset = BSet::finite(vec![2, 3, 5]).unwrap();
        let nu = MirskyMeasure::new(bset.clone());
        let c = w("0100");
        let direct: f64 = crate::words::supersets(&c, &bset, Budget::default())
            .unwrap()
            .map(|cp| nu.eval(&cp).unwrap().mid() * libm::exp2(-(cp.ones_count() as f64)))
            .sum();
        let k = convolve_eval(&nu, &bset, 0.5, &c, Budget::default()).unwrap();
        assert!((k.mid() - direct).abs() < 1e-15);
    }

    #[test]
    fn integral_of_the_family() {
        let bset = BSet::validate(vec![2, 9, 25, 49], 0.05, Some(50)).unwrap();
        let d = bset.free_density();
        let (a00, a01, a1) = (0.4, -0.3, 1.2);
        let phi = Potential2::family(a00, a01, a1);
        let p = 0.3;
        let k = ConvolvedMeasure::mirsky(bset, p).unwrap();
        let got = integral_phi(&k, &phi).unwrap();
        let f = |d: f64| a00 * (1.0 - 2.0 * d) + d * (2.0 * a00 * p + (a01 + a1) * (1.0 - p));
        let (x, y) = (f(d.lo), f(d.hi));
        assert!(got.lo <= x.max(y) + 1e-12 && got.hi >= x.min(y) - 1e-12, "{got} vs [{x}, {y}]");
        let c = integral_phi(&k, &Potential2::constant(0.7)).unwrap();
        assert!(c.contains(0.7) || (c.mid() - 0.7).abs() < 1e-12);
    }
}
