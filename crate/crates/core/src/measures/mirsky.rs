//! The Mirsky measure `nu_eta`, the image of Haar measure on
//! `prod Z/bZ` under the freeness map.
//!
//! Position `i` of a Haar-random point is free when `omega_b + i != 0 mod b`
//! for every `b`, independently over `b`. For the listed elements `E` the
//! mass `nu_E(C)` is computed exactly, either by inclusion-exclusion over the
//! zeros of `C`,
//!
//! `nu_E(C) = sum_{S subset Z} (-1)^|S| F(A + S)`,
//! `F(T) = prod_{b in E} (1 - |T mod b| / b)`,
//!
//! or by a dynamic programme over the elements whose state is the set of
//! zeros not yet hit. The unlisted tail only enters through
//! `tail = sum 1/b` over the missing elements:
//!
//! `nu_E(C) (1 - |A| tail) <= nu(C) <= nu_E(C) + tail sum_{j in Z} F(A + j)`,
//!
//! the upper bound also capped by `F(A)`. Here `A` and `Z` are the positions
//! of the ones and zeros of `C`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::bset::{BSet, Product};
use crate::interval::{add_dir, div_dir, mul_dir, Interval};
use crate::measures::{CylinderMeasure, MeasureError};
use crate::words::{Word, WordError};

/// Largest number of zeros accepted by the inclusion-exclusion route.
pub const INCL_EXCL_MAX_ZEROS: usize = 28;
/// Largest period accepted by [`mirsky_crt_oracle`].
pub const CRT_MAX_PERIOD: u128 = 10_000_000;
/// Zeros above which [`MirskyMethod::Auto`] switches to the residue DP.
pub const AUTO_SWITCH_ZEROS: usize = 16;
const DEFAULT_STATE_BUDGET: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MirskyMethod {
    /// Inclusion-exclusion for few zeros, the residue DP otherwise.
    #[default]
    Auto,
    InclusionExclusion,
    ResidueDp,
}

/// Number of classes mod `b` met by the positions in `t`, for words of
/// length `n`.
fn occupied(t: u128, b: u64, n: usize) -> u64 {
    if b >= n as u64 {
        return t.count_ones() as u64;
    }
    let mut classes = 0u128;
    let mut rest = t;
    while rest != 0 {
        let i = rest.trailing_zeros() as u64;
        classes |= 1u128 << (i % b);
        rest &= rest - 1;
    }
    classes.count_ones() as u64
}

fn product_for(bset: &BSet, t: u128, n: usize) -> Product {
    bset.occupancy_product(|b| occupied(t, b, n))
}

struct Shape {
    n: usize,
    ones: u128,
    zeros: u128,
}

fn shape(c: &Word) -> Result<Shape, MeasureError> {
    let n = c.len();
    if n == 0 {
        return Err(WordError::Empty.into());
    }
    let ones = c.to_u128().ok_or(WordError::WordTooLong { len: n, max: 128 })?;
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    Ok(Shape {
        n,
        ones,
        zeros: full & !ones,
    })
}

fn incl_excl(bset: &BSet, sh: &Shape) -> Result<Product, MeasureError> {
    let zeros: Vec<u32> = (0..sh.n as u32).filter(|&i| sh.zeros >> i & 1 == 1).collect();
    if zeros.len() > INCL_EXCL_MAX_ZEROS {
        return Err(MeasureError::TooManyZeros {
            zeros: zeros.len(),
            max: INCL_EXCL_MAX_ZEROS,
        });
    }
    let base = product_for(bset, sh.ones, sh.n);
    if zeros.is_empty() {
        return Ok(base);
    }
    if let Product::Exact { num: 0, .. } = base {
        return Ok(base);
    }
    let terms = 1u64 << zeros.len();
    let subset_mask = |s: u64| {
        zeros
            .iter()
            .enumerate()
            .filter(|(k, _)| s >> k & 1 == 1)
            .fold(sh.ones, |m, (_, &i)| m | 1u128 << i)
    };
    // Exact route: numerators over the common denominator prod b.
    if let Product::Exact { den, .. } = base {
        let mut pos = 0u128;
        let mut neg = 0u128;
        let mut overflow = false;
        for s in 0..terms {
            let num = match product_for(bset, subset_mask(s), sh.n) {
                Product::Exact { num: 0, .. } => continue,
                Product::Exact { num, .. } => num,
                Product::Approx(_) => {
                    overflow = true;
                    break;
                }
            };
            let acc = if s.count_ones() % 2 == 0 { &mut pos } else { &mut neg };
            match acc.checked_add(num) {
                Some(v) => *acc = v,
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        if !overflow {
            return Ok(Product::Exact { num: pos - neg, den });
        }
    }
    let mut acc = Interval::ZERO;
    for s in 0..terms {
        let term = product_for(bset, subset_mask(s), sh.n).value(false);
        acc = if s.count_ones() % 2 == 0 { acc + term } else { acc - term };
    }
    Ok(Product::Approx(acc.clamp_lo(0.0).clamp_hi(base.value(false).hi)))
}

trait Weight: Copy {
    fn zero() -> Self;
    fn one() -> Self;
    fn plus(self, other: Self) -> Self;
    /// Multiplies by `mult / b`; exact weights defer the division.
    fn times(self, mult: u64, b: u64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Weight for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn plus(self, other: Self) -> Self {
        self + other
    }
    fn times(self, mult: u64, _b: u64) -> Self {
        self * mult as u128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl Weight for Interval {
    fn zero() -> Self {
        Interval::ZERO
    }
    fn one() -> Self {
        Interval::ONE
    }
    fn plus(self, other: Self) -> Self {
        self + other
    }
    fn times(self, mult: u64, b: u64) -> Self {
        Interval::new(
            mul_dir(self.lo, div_dir(mult as f64, b as f64, false), false),
            mul_dir(self.hi, div_dir(mult as f64, b as f64, true), true),
        )
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

fn residue_dp_with<W: Weight>(bset: &BSet, sh: &Shape, budget: usize) -> Result<W, MeasureError> {
    let n = sh.n;
    let elements = bset.elements();
    let zero_count = sh.zeros.count_ones() as u64;
    let ones_count = sh.ones.count_ones() as u64;
    // Classes of each element as position masks, excluding those hitting a one.
    let classes: Vec<Vec<u128>> = elements
        .iter()
        .map(|&b| {
            if b >= n as u64 {
                return Vec::new();
            }
            (0..b as usize)
                .map(|c| (c..n).step_by(b as usize).fold(0u128, |m, j| m | 1u128 << j))
                .filter(|&h| h & sh.ones == 0)
                .collect()
        })
        .collect();
    // Most zeros the elements from index k on can still hit.
    let mut reach = vec![0u64; elements.len() + 1];
    for k in (0..elements.len()).rev() {
        let here = if elements[k] >= n as u64 {
            1
        } else {
            classes[k].iter().map(|h| (h & sh.zeros).count_ones()).max().unwrap_or(0) as u64
        };
        reach[k] = reach[k + 1] + here;
    }
    let mut states: BTreeMap<u128, W> = BTreeMap::new();
    if zero_count <= reach[0] {
        states.insert(sh.zeros, W::one());
    }
    for (k, &b) in elements.iter().enumerate() {
        let mut next: BTreeMap<u128, W> = BTreeMap::new();
        let mut push = |s: u128, w: W| {
            if s.count_ones() as u64 <= reach[k + 1] {
                let e = next.entry(s).or_insert(W::zero());
                *e = e.plus(w);
            }
        };
        for (&s, &w) in &states {
            if b >= n as u64 {
                let stay = b - ones_count - s.count_ones() as u64;
                if stay > 0 {
                    push(s, w.times(stay, b));
                }
                let mut rest = s;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    push(s & !bit, w.times(1, b));
                    rest &= rest - 1;
                }
            } else {
                for &h in &classes[k] {
                    push(s & !h, w.times(1, b));
                }
            }
        }
        if next.len() > budget {
            return Err(MeasureError::StateBudgetExceeded(budget));
        }
        next.retain(|_, w| !w.is_zero());
        states = next;
        if states.is_empty() {
            break;
        }
    }
    Ok(states.get(&0).copied().unwrap_or(W::zero()))
}

fn residue_dp(bset: &BSet, sh: &Shape, budget: usize) -> Result<Product, MeasureError> {
    if sh.zeros == 0 {
        return Ok(product_for(bset, sh.ones, sh.n));
    }
    let den = bset
        .period()
        .filter(|&d| d <= 1u128 << 127);
    match den {
        Some(den) => {
            let num = residue_dp_with::<u128>(bset, sh, budget)?;
            Ok(Product::Exact { num, den })
        }
        None => {
            let upper = product_for(bset, sh.ones, sh.n).value(false).hi;
            let iv = residue_dp_with::<Interval>(bset, sh, budget)?;
            Ok(Product::Approx(iv.clamp_hi(upper)))
        }
    }
}

fn finalize(bset: &BSet, sh: &Shape, finite_part: Product) -> Interval {
    if bset.is_exactly_finite() {
        return finite_part.value(true);
    }
    let nu = finite_part.value(false);
    let keep = bset.tail_keep(sh.ones.count_ones() as usize);
    let lo = mul_dir(nu.lo, keep, false);
    let cap = product_for(bset, sh.ones, sh.n).value(false).hi;
    let mut spill = 0.0f64;
    let mut rest = sh.zeros;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        spill = add_dir(spill, product_for(bset, sh.ones | bit, sh.n).value(false).hi, true);
        rest &= rest - 1;
    }
    let hi = add_dir(nu.hi, mul_dir(bset.tail_bound(), spill, true), true).min(cap);
    Interval::new(lo.min(hi), hi)
}

/// Enclosure of `nu_eta([C])` by the chosen route.
pub fn mirsky_eval_with(bset: &BSet, c: &Word, method: MirskyMethod) -> Result<Interval, MeasureError> {
    eval_inner(bset, c, method, DEFAULT_STATE_BUDGET)
}

fn eval_inner(bset: &BSet, c: &Word, method: MirskyMethod, budget: usize) -> Result<Interval, MeasureError> {
    let sh = shape(c)?;
    let zeros = sh.zeros.count_ones() as usize;
    let finite_part = match method {
        MirskyMethod::InclusionExclusion => incl_excl(bset, &sh)?,
        MirskyMethod::ResidueDp => residue_dp(bset, &sh, budget)?,
        MirskyMethod::Auto if zeros <= AUTO_SWITCH_ZEROS => incl_excl(bset, &sh)?,
        MirskyMethod::Auto => residue_dp(bset, &sh, budget)?,
    };
    Ok(finalize(bset, &sh, finite_part))
}

/// Enclosure of `nu_eta([C])`.
pub fn mirsky_eval(bset: &BSet, c: &Word) -> Result<Interval, MeasureError> {
    mirsky_eval_with(bset, c, MirskyMethod::Auto)
}

/// Exact frequency of `C` in one period of `eta` for an exactly finite `B`,
/// by direct counting over the residues mod `prod b`.
pub fn mirsky_crt_oracle(bset: &BSet, c: &Word) -> Result<Ratio<u128>, MeasureError> {
    if !bset.is_exactly_finite() {
        return Err(MeasureError::NotExactlyFinite);
    }
    if c.is_empty() {
        return Err(WordError::Empty.into());
    }
    let period = bset.period().unwrap_or(u128::MAX);
    if period > CRT_MAX_PERIOD {
        return Err(MeasureError::PeriodTooLarge(period));
    }
    let len = period as usize;
    let mut free = vec![true; len];
    for &b in bset.elements() {
        for x in (0..len).step_by(b as usize) {
            free[x] = false;
        }
    }
    let bits = c.bits().collect::<Vec<bool>>();
    let count = (0..len)
        .filter(|&r| bits.iter().enumerate().all(|(i, &bit)| free[(r + i) % len] == bit))
        .count();
    Ok(Ratio::new(count as u128, period))
}

/// The Mirsky measure of a [`BSet`], evaluated by [`mirsky_eval_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct MirskyMeasure {
    bset: BSet,
    method: MirskyMethod,
    state_budget: usize,
}

impl MirskyMeasure {
    pub fn new(bset: BSet) -> MirskyMeasure {
        MirskyMeasure {
            bset,
            method: MirskyMethod::Auto,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }

    pub fn with_method(mut self, method: MirskyMethod) -> MirskyMeasure {
        self.method = method;
        self
    }

    pub fn with_state_budget(mut self, states: usize) -> MirskyMeasure {
        self.state_budget = states;
        self
    }

    pub fn bset(&self) -> &BSet {
        &self.bset
    }
}

impl CylinderMeasure for MirskyMeasure {
    fn eval(&self, c: &Word) -> Result<Interval, MeasureError> {
        eval_inner(&self.bset, c, self.method, self.state_budget)
    }
}
