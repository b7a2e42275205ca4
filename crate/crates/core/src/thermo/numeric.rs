//! Birkhoff sums and partition functions by exhaustive enumeration.

use core::ops::ControlFlow;

use crate::bset::BSet;
use crate::thermo::{Potential2, ThermoError};
use crate::words::search::Leaf;
use crate::words::{count_language, enumerate_language, is_admissible, Word};
use crate::Budget;

/// Sum of `v(w_i, w_{i+1})` over the `n - 1` inner pairs of a packed word.
fn inner_sum(bits: u128, n: usize, phi: &Potential2) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let m = if n - 1 == 128 { u128::MAX } else { (1u128 << (n - 1)) - 1 };
    let x = bits & m;
    let y = (bits >> 1) & m;
    let n11 = (x & y).count_ones() as f64;
    let n10 = (x & !y & m).count_ones() as f64;
    let n01 = (!x & y & m).count_ones() as f64;
    let n00 = (n - 1) as f64 - n11 - n10 - n01;
    n00 * phi.value(false, false) + n01 * phi.value(false, true) + n10 * phi.value(true, false) + n11 * phi.value(true, true)
}

fn leaf_sup(leaf: &Leaf<'_>, phi: &Potential2) -> f64 {
    let n = leaf.len;
    let last = leaf.bits >> (n - 1) & 1 == 1;
    let tail = if leaf.accepts_one_at(n) {
        phi.sup_on(last)
    } else {
        phi.value(last, false)
    };
    inner_sum(leaf.bits, n, phi) + tail
}

/// `sup_{x in [W]} sum_{i<n} phi(S^i x)`: the inner pairs of `W` plus the
/// best admissible continuation symbol.
pub fn birkhoff_sup(w: &Word, phi: &Potential2, bset: &BSet) -> Result<f64, ThermoError> {
    if w.is_empty() {
        return Err(crate::words::WordError::Empty.into());
    }
    if !is_admissible(w, bset) {
        return Err(ThermoError::NotAdmissible);
    }
    let n = w.len();
    let mut sum = 0.0;
    for i in 0..n - 1 {
        sum += phi.value(w.get(i), w.get(i + 1));
    }
    let last = w.get(n - 1);
    let tail = if is_admissible(&w.pushed(true), bset) {
        phi.sup_on(last)
    } else {
        phi.value(last, false)
    };
    Ok(sum + tail)
}

/// `log2 Z_n = log2 sum_{W in L_n} 2^{birkhoff_sup(W)}`, accumulated with a
/// running maximum shift in lexicographic order.
pub fn log2_partition_sum(n: usize, phi: &Potential2, bset: &BSet, budget: Budget) -> Result<f64, ThermoError> {
    if *phi == Potential2::constant(0.0) {
        let count = count_language(n, bset, budget)?;
        return Ok(libm::log2(count as f64));
    }
    let mut search = crate::words::search::Search::new(n, 0, bset, budget)?;
    let mut shift = f64::NEG_INFINITY;
    let mut acc = 0.0f64;
    search.run(|leaf| {
        let x = leaf_sup(leaf, phi);
        if x > shift {
            acc = acc * libm::exp2(shift - x) + 1.0;
            shift = x;
        } else {
            acc += libm::exp2(x - shift);
        }
        ControlFlow::Continue(())
    })?;
    Ok(shift + libm::log2(acc))
}

/// `log2 Z_n / n`, an upper bound on the pressure of the truncated system.
pub fn partition_pressure_numeric(n: usize, phi: &Potential2, bset: &BSet, budget: Budget) -> Result<f64, ThermoError> {
    Ok(log2_partition_sum(n, phi, bset, budget)? / n as f64)
}

/// A word attaining `max_{W in L_n} birkhoff_sup(W)` (the first in
/// lexicographic order) and that maximum.
pub fn birkhoff_maximizer(n: usize, phi: &Potential2, bset: &BSet, budget: Budget) -> Result<(Word, f64), ThermoError> {
    let mut search = crate::words::search::Search::new(n, 0, bset, budget)?;
    let mut best = (0u128, f64::NEG_INFINITY);
    search.run(|leaf| {
        let x = leaf_sup(leaf, phi);
        if x > best.1 {
            best = (leaf.bits, x);
        }
        ControlFlow::Continue(())
    })?;
    Ok((Word::from_u128(best.0, n), best.1))
}

/// `max_{W in L_n} birkhoff_sup(W) / n`. The sequence of maxima is
/// subadditive, so every term bounds `D^phi` from above.
pub fn dphi_upper(n: usize, phi: &Potential2, bset: &BSet, budget: Budget) -> Result<f64, ThermoError> {
    Ok(birkhoff_maximizer(n, phi, bset, budget)?.1 / n as f64)
}

/// Brute-force `log2 Z_n` through [`enumerate_language`] and
/// [`birkhoff_sup`], for cross-checking the packed kernel.
pub fn log2_partition_sum_reference(n: usize, phi: &Potential2, bset: &BSet, budget: Budget) -> Result<f64, ThermoError> {
    let mut total = 0.0;
    for w in enumerate_language(n, bset, usize::MAX, budget)? {
        total += libm::exp2(birkhoff_sup(&w, phi, bset)?);
    }
    Ok(libm::log2(total))
}
