//! Exact rationals over `u128` and their conversion to enclosing intervals.

use core::cmp::Ordering;

use num_rational::Ratio;

use crate::interval::Interval;

/// Nearest `f64` to `num / den` (ties to even) together with the ordering of
/// the exact value relative to the returned float.
pub fn ratio_to_f64(num: u128, den: u128) -> (f64, Ordering) {
    assert!(den != 0, "zero denominator");
    assert!(den <= 1u128 << 127, "denominator too large");
    if num == 0 {
        return (0.0, Ordering::Equal);
    }
    let mut mant = num / den;
    let mut rem = num % den;
    let mut exp: i32 = 0;
    let mut sticky = false;
    while mant >= 1u128 << 55 {
        sticky |= mant & 1 == 1;
        mant >>= 1;
        exp += 1;
    }
    while mant < 1u128 << 54 {
        let twice = rem << 1;
        mant <<= 1;
        if twice >= den {
            mant |= 1;
            rem = twice - den;
        } else {
            rem = twice;
        }
        exp -= 1;
    }
    sticky |= rem != 0;
    let low = mant & 3;
    mant >>= 2;
    exp += 2;
    let round_up = low == 3 || (low == 2 && (sticky || mant & 1 == 1));
    if round_up {
        mant += 1;
    }
    let value = libm::scalbn(mant as f64, exp);
    let order = if low == 0 && !sticky {
        Ordering::Equal
    } else if round_up {
        Ordering::Less
    } else {
        Ordering::Greater
    };
    (value, order)
}

/// Tightest interval of doubles containing `num / den`.
pub fn ratio_enclosure(num: u128, den: u128) -> Interval {
    let (x, order) = ratio_to_f64(num, den);
    match order {
        Ordering::Equal => Interval::point(x),
        Ordering::Greater => Interval::new(x, x.next_up()),
        Ordering::Less => Interval::new(x.next_down(), x),
    }
}

pub fn to_f64(r: &Ratio<u128>) -> f64 {
    ratio_to_f64(*r.numer(), *r.denom()).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_native_division_for_small_values() {
        for (n, d) in [(1u128, 3u128), (2, 3), (5, 7), (22, 7), (1, 1), (3, 4), (123456789, 1000)] {
            let (x, _) = ratio_to_f64(n, d);
            assert_eq!(x, n as f64 / d as f64, "{n}/{d}");
        }
    }

    #[test]
    fn exactness_is_reported() {
        assert_eq!(ratio_to_f64(3, 4), (0.75, Ordering::Equal));
        let (x, o) = ratio_to_f64(1, 3);
        assert_ne!(o, Ordering::Equal);
        let enc = ratio_enclosure(1, 3);
        assert!(enc.contains(x));
        assert!(enc.width() > 0.0);
    }

    #[test]
    fn huge_operands() {
        let den = 1u128 << 120;
        let num = den / 3;
        let (x, _) = ratio_to_f64(num, den);
        assert!((x - 1.0 / 3.0).abs() < 1e-15);
        let (y, o) = ratio_to_f64(u128::MAX, 1);
        assert_eq!(o, Ordering::Less);
        assert_eq!(y, 2f64.powi(128));
    }
}
