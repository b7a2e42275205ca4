//! Sufficient conditions for an equilibrium state `kappa = nu * B_{q,1-q}`
//! not to be a Gibbs measure.
//!
//! For a potential `phi` on the hereditary closure, with `Var_s = Var phi([s])`:
//!
//! 1. `P <= (Var_0 - log2(1-q) - Var_1) d + d^phi - Var_0`,
//! 2. `sup phi([1]) >= sup phi([0])`,
//! 3. `Var_1 <= Var_0 - log2(1-q)`.
//!
//! Each condition is stored with its slack (right side minus left side) as
//! an interval. Several admissible inputs satisfy condition 1 with equality,
//! so comparisons allow a tolerance relative to the size of the terms.

use crate::interval::Interval;
use crate::measures::one_minus;
use crate::thermo::closed::{dphi_lower, log_partition_constant, pressure_closed_form};
use crate::thermo::{Potential2, ThermoError};

/// Relative tolerance used by the default comparisons.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Condition {
    pub status: Status,
    /// Right side minus left side; the condition holds when it is `>= 0`.
    pub slack: Interval,
}

impl Condition {
    /// Classifies a slack interval: holds if it is `>= -tol` throughout,
    /// fails if it is `< -tol` throughout.
    pub fn from_slack(slack: Interval, tol: f64) -> Condition {
        let status = if slack.lo >= -tol {
            Status::Holds
        } else if slack.hi < -tol {
            Status::Fails
        } else {
            Status::Indeterminate
        };
        Condition { status, slack }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// All three conditions hold: `kappa` is not Gibbs for `phi`.
    NonGibbsCertified,
    /// Some condition fails; the criterion says nothing.
    NotCertified,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GibbsCertificate {
    pub q: f64,
    pub cond_pressure: Condition,
    pub cond_sup: Condition,
    pub cond_var: Condition,
    pub verdict: Verdict,
}

impl GibbsCertificate {
    fn assemble(q: f64, cond_pressure: Condition, cond_sup: Condition, cond_var: Condition) -> GibbsCertificate {
        let all = [cond_pressure.status, cond_sup.status, cond_var.status];
        let verdict = if all.contains(&Status::Fails) {
            Verdict::NotCertified
        } else if all.iter().all(|&s| s == Status::Holds) {
            Verdict::NonGibbsCertified
        } else {
            Verdict::Indeterminate
        };
        GibbsCertificate {
            q,
            cond_pressure,
            cond_sup,
            cond_var,
            verdict,
        }
    }
}

fn check_q(q: f64) -> Result<(), ThermoError> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(ThermoError::QOutOfRange(q))
    }
}

fn scale_of(ivs: &[Interval]) -> f64 {
    ivs.iter().fold(1.0f64, |m, iv| m.max(iv.mag()))
}

/// `-log2(1 - q)`.
fn neg_log_keep(q: f64) -> Interval {
    -one_minus(q).log2()
}

/// Evaluates the three conditions for given enclosures of `d`, `d^phi`
/// and `P`, with tolerance `DEFAULT_RELATIVE_TOLERANCE` times the largest
/// magnitude involved.
pub fn gibbs_certificate(
    phi: &Potential2,
    q: f64,
    d: Interval,
    dphi: Interval,
    pressure: Interval,
) -> Result<GibbsCertificate, ThermoError> {
    check_q(q)?;
    let nl = neg_log_keep(q);
    let var0 = Interval::point(phi.var_on(false));
    let var1 = Interval::point(phi.var_on(true));
    let tol = DEFAULT_RELATIVE_TOLERANCE * scale_of(&[d, dphi, pressure, nl, var0, var1]);
    gibbs_certificate_with_tolerance(phi, q, d, dphi, pressure, tol)
}

/// [`gibbs_certificate`] with an explicit absolute tolerance; `0` gives
/// strict interval comparisons.
pub fn gibbs_certificate_with_tolerance(
    phi: &Potential2,
    q: f64,
    d: Interval,
    dphi: Interval,
    pressure: Interval,
    tol: f64,
) -> Result<GibbsCertificate, ThermoError> {
    check_q(q)?;
    let nl = neg_log_keep(q);
    let var0 = Interval::point(phi.var_on(false));
    let var1 = Interval::point(phi.var_on(true));
    let coef = var0 + nl - var1;
    let pressure_slack = coef * d + dphi - var0 - pressure;
    let sup_slack = Interval::point(phi.sup_on(true)) - Interval::point(phi.sup_on(false));
    let var_slack = var0 + nl - var1;
    Ok(GibbsCertificate::assemble(
        q,
        Condition::from_slack(pressure_slack, tol),
        Condition::from_slack(sup_slack, 0.0),
        Condition::from_slack(var_slack, tol),
    ))
}

/// The conditions for `phi = a00 1[00] + a01 1[01] + a1 1[1]` on `X_B`
/// with `2 in B`, using the closed-form pressure and the lower bound on
/// `d^phi`. The pressure slack is simplified before evaluation to
/// `-Var_0 + d (Var_0 - log2(1-q) + max(2 a00, s) - L)`, which removes the
/// repeated occurrences of `d`.
pub fn certify_family(a00: f64, a01: f64, a1: f64, q: f64, d: Interval) -> Result<GibbsCertificate, ThermoError> {
    check_q(q)?;
    let phi = Potential2::family(a00, a01, a1);
    let nl = neg_log_keep(q);
    let var0 = Interval::point(phi.var_on(false));
    let s = Interval::point(a1) + Interval::point(a01);
    let top = s.max(&Interval::point(2.0 * a00));
    let big_l = log_partition_constant(a00, a01, a1);
    let pressure_slack = d * (var0 + nl + top - big_l) - var0;
    let tol = DEFAULT_RELATIVE_TOLERANCE
        * scale_of(&[
            d,
            nl,
            var0,
            big_l,
            top,
            pressure_closed_form(a00, a01, a1, d),
            dphi_lower(a00, a01, a1, d),
        ]);
    let sup_slack = Interval::point(phi.sup_on(true)) - Interval::point(phi.sup_on(false));
    Ok(GibbsCertificate::assemble(
        q,
        Condition::from_slack(pressure_slack, tol),
        Condition::from_slack(sup_slack, 0.0),
        Condition::from_slack(var0 + nl, tol),
    ))
}

/// The conditions at the exact equilibrium parameter
/// `p = 2^(2 a00) / (2^s + 2^(2 a00))`, `s = a1 + a01`. There
/// `-log2(1 - p) = L - s`, so the pressure slack is
/// `-Var_0 (1 - d) + d max(2 a00 - s, 0)` and the variation slack is
/// `Var_0 + L - s`; both are evaluated without cancellation. The reported
/// `q` is the rounded `p`.
pub fn certify_equilibrium(a00: f64, a01: f64, a1: f64, d: Interval) -> GibbsCertificate {
    let phi = Potential2::family(a00, a01, a1);
    let var0 = Interval::point(phi.var_on(false));
    let s = Interval::point(a1) + Interval::point(a01);
    let excess = (Interval::point(2.0 * a00) - s).clamp_lo(0.0);
    let pressure_slack = d * excess - var0 * (Interval::ONE - d);
    let nl = log_partition_constant(a00, a01, a1) - s;
    let sup_slack = Interval::point(phi.sup_on(true)) - Interval::point(phi.sup_on(false));
    GibbsCertificate::assemble(
        crate::thermo::closed::equilibrium_p(a00, a01, a1),
        Condition::from_slack(pressure_slack, 0.0),
        Condition::from_slack(sup_slack, 0.0),
        Condition::from_slack(var0 + nl, 0.0),
    )
}

/// The specialization with vanishing variations and `q = 1/2`:
/// `P <= d + d^phi`.
pub fn zero_variation_certificate(d: Interval, dphi: Interval, pressure: Interval) -> Condition {
    let tol = DEFAULT_RELATIVE_TOLERANCE * scale_of(&[d, dphi, pressure]);
    Condition::from_slack(d + dphi - pressure, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::closed::equilibrium_p;

    #[test]
    fn one_cylinder_family_is_certified() {
        let d = Interval::new(0.40, 0.41);
        for (a0, a1) in [(0.0, 1.0), (-1.0, 0.5), (0.3, 0.3), (1.5, 2.0)] {
            let cert = certify_equilibrium(a0, a0, a1, d);
            assert_eq!(cert.verdict, Verdict::NonGibbsCertified, "{a0} {a1}");
            let p = equilibrium_p(a0, a0, a1);
            let general = gibbs_certificate(
                &Potential2::family(a0, a0, a1),
                p,
                Interval::point(0.4),
                dphi_lower(a0, a0, a1, Interval::point(0.4)),
                pressure_closed_form(a0, a0, a1, Interval::point(0.4)),
            )
            .unwrap();
            assert_eq!(general.verdict, Verdict::NonGibbsCertified, "{a0} {a1} {general:?}");
        }
    }

    #[test]
    fn pressure_condition_fails_in_the_middle_regime() {
        let d = Interval::new(0.40, 0.41);
        for (a00, a01, a1) in [(1.0, -1.0, 1.5), (0.5, -2.0, 1.0), (0.0, -1.0, 0.5)] {
            let cert = certify_equilibrium(a00, a01, a1, d);
            assert_eq!(cert.cond_pressure.status, Status::Fails);
            let p = equilibrium_p(a00, a01, a1);
            let other = certify_family(a00, a01, a1, p, d).unwrap();
            assert_eq!(other.cond_pressure.status, Status::Fails);
        }
    }

    #[test]
    fn constant_potential() {
        let c = 0.8;
        let d = Interval::point(0.3);
        let phi = Potential2::constant(c);
        let cert = gibbs_certificate(&phi, 0.5, d, Interval::point(c), pressure_closed_form(c, c, c, d)).unwrap();
        assert_eq!(cert.cond_sup.status, Status::Holds);
        assert_eq!(cert.cond_var.status, Status::Holds);
        assert_eq!(cert.cond_pressure.status, Status::Holds);
        let cor = zero_variation_certificate(d, Interval::point(c), pressure_closed_form(c, c, c, d));
        assert_eq!(cor.status, Status::Holds);
    }

    #[test]
    fn q_range() {
        let phi = Potential2::constant(0.0);
        let d = Interval::point(0.3);
        assert_eq!(gibbs_certificate(&phi, 0.0, d, d, d), Err(ThermoError::QOutOfRange(0.0)));
        assert_eq!(gibbs_certificate(&phi, 1.0, d, d, d), Err(ThermoError::QOutOfRange(1.0)));
    }

    #[test]
    fn shift_invariance() {
        let (a00, a01, a1) = (0.2, -0.4, 1.1);
        let d = Interval::point(0.35);
        let p = equilibrium_p(a00, a01, a1);
        let base = Potential2::family(a00, a01, a1);
        let c = 0.75;
        let shifted = base.add_constant(c);
        let v0 = gibbs_certificate(&base, p, d, dphi_lower(a00, a01, a1, d), pressure_closed_form(a00, a01, a1, d)).unwrap();
        let v1 = gibbs_certificate(
            &shifted,
            p,
            d,
            dphi_lower(a00, a01, a1, d) + Interval::point(c),
            pressure_closed_form(a00, a01, a1, d) + Interval::point(c),
        )
        .unwrap();
        assert_eq!(v0.verdict, v1.verdict);
        assert_eq!(v0.cond_pressure.status, v1.cond_pressure.status);
    }
}
