//! Closed forms for `phi = a00 1[00] + a01 1[01] + a1 1[1]` on `X_B` with
//! `2 in B`. Each is affine in the density `d` and is evaluated over an
//! interval of densities.
//!
//! With `s = a1 + a01` and `L = log2(2^s + 2^(2 a00))`:
//!
//! - pressure `P = a00 (1 - 2d) + d L`,
//! - equilibrium parameter `p = 2^(2 a00) / (2^s + 2^(2 a00))`,
//! - `d^phi >= a00 (1 - 2d) + d max(2 a00, s)`.

use crate::interval::{binary_entropy, log2_sum_exp2, Interval};

fn sum(a: f64, b: f64) -> Interval {
    Interval::point(a) + Interval::point(b)
}

/// `log2(2^x + 2^y)` over boxes, using monotonicity in both arguments.
fn log2_sum_exp2_iv(x: Interval, y: Interval) -> Interval {
    Interval::new(log2_sum_exp2(x.lo, y.lo).lo, log2_sum_exp2(x.hi, y.hi).hi)
}

/// `L = log2(2^(a1 + a01) + 2^(2 a00))`.
pub fn log_partition_constant(a00: f64, a01: f64, a1: f64) -> Interval {
    log2_sum_exp2_iv(sum(a1, a01), Interval::point(2.0 * a00))
}

/// `a00 + d (slope)` for an interval `d`.
fn affine(a00: f64, slope: Interval, d: Interval) -> Interval {
    Interval::point(a00) + d * slope
}

/// Pressure `a00 (1 - 2d) + d log2(2^(a1 + a01) + 2^(2 a00))`.
pub fn pressure_closed_form(a00: f64, a01: f64, a1: f64, d: Interval) -> Interval {
    let slope = log_partition_constant(a00, a01, a1) - Interval::point(2.0 * a00);
    affine(a00, slope, d)
}

/// Entropy `H2(p) d` of `nu_eta * B_{p,1-p}`.
pub fn entropy_convolved(p: f64, d: Interval) -> Interval {
    binary_entropy(p) * d
}

/// `1 / (1 + 2^(a1 + a01 - 2 a00))`.
pub fn equilibrium_p(a00: f64, a01: f64, a1: f64) -> f64 {
    1.0 / (1.0 + libm::exp2(a1 + a01 - 2.0 * a00))
}

/// Enclosure of the equilibrium parameter.
pub fn equilibrium_p_interval(a00: f64, a01: f64, a1: f64) -> Interval {
    let e = (sum(a1, a01) - Interval::point(2.0 * a00)).exp2();
    Interval::ONE.div(&(Interval::ONE + e)).clamp_hi(1.0)
}

/// `P - h(kappa) - integral of phi` at `p = equilibrium_p`, with the three
/// closed forms for `kappa = nu_eta * B_{p,1-p}`. The `a00` terms cancel
/// identically, so the residual is evaluated in the factored form
/// `d (L - H2(p) - 2 a00 p - (a1 + a01)(1 - p))`.
pub fn equilibrium_residual(a00: f64, a01: f64, a1: f64, d: Interval) -> Interval {
    residual_at(a00, a01, a1, equilibrium_p(a00, a01, a1), d)
}

/// The same residual at an arbitrary `p`.
pub fn residual_at(a00: f64, a01: f64, a1: f64, p: f64, d: Interval) -> Interval {
    let p_iv = Interval::point(p);
    let inner = log_partition_constant(a00, a01, a1)
        - binary_entropy(p)
        - Interval::point(2.0 * a00) * p_iv
        - sum(a1, a01) * (Interval::ONE - p_iv);
    d * inner
}

/// `integral phi d(nu_eta * B_{p,1-p}) = a00 (1 - 2d) + d (2 a00 p + (a01 + a1)(1 - p))`.
pub fn integral_closed_form(a00: f64, a01: f64, a1: f64, p: f64, d: Interval) -> Interval {
    let p_iv = Interval::point(p);
    let slope = Interval::point(2.0 * a00) * p_iv + sum(a1, a01) * (Interval::ONE - p_iv) - Interval::point(2.0 * a00);
    affine(a00, slope, d)
}

/// `a00 (1 - 2d) + d max(2 a00, a1 + a01)`, a lower bound on `d^phi`.
pub fn dphi_lower(a00: f64, a01: f64, a1: f64, d: Interval) -> Interval {
    let top = sum(a1, a01).max(&Interval::point(2.0 * a00));
    affine(a00, top - Interval::point(2.0 * a00), d)
}
