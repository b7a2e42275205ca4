//! Birkhoff sums, partition functions, pressures, entropies, equilibrium
//! parameters and Gibbs certificates.

use alloc::vec::Vec;

use thiserror::Error;

use crate::bset::BSet;
use crate::interval::Interval;
use crate::measures::MeasureError;
use crate::words::WordError;
use crate::Budget;

mod certificate;
mod closed;
mod numeric;
mod potential;
mod trajectory;

pub use certificate::{
    certify_equilibrium, certify_family, zero_variation_certificate, gibbs_certificate,
    gibbs_certificate_with_tolerance, Condition, GibbsCertificate, Status, Verdict, DEFAULT_RELATIVE_TOLERANCE,
};
pub use closed::{
    dphi_lower, entropy_convolved, equilibrium_p, equilibrium_p_interval, equilibrium_residual,
    integral_closed_form, log_partition_constant, pressure_closed_form, residual_at,
};
pub use numeric::{
    birkhoff_maximizer, birkhoff_sup, dphi_upper, log2_partition_sum, log2_partition_sum_reference,
    partition_pressure_numeric,
};
pub use potential::Potential2;
pub use trajectory::{gibbs_trajectory, GibbsTrajectory, TrajectoryRow, MAXIMIZER_BUDGET};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermoError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("word is not admissible")]
    NotAdmissible,
    #[error("q = {0} is outside (0, 1)")]
    QOutOfRange(f64),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Closed-form pressure beside the numeric upper bounds `log2 Z_n / n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PressureReport {
    pub closed_form: Interval,
    pub numeric_upper: Vec<(usize, f64)>,
    pub d_interval: Interval,
}

/// Pressure report for the three-parameter family on `X_B` with `2 in B`.
pub fn pressure_report(
    a00: f64,
    a01: f64,
    a1: f64,
    bset: &BSet,
    ns: &[usize],
    budget: Budget,
) -> Result<PressureReport, ThermoError> {
    let d = bset.free_density();
    let phi = Potential2::family(a00, a01, a1);
    let numeric_upper = ns
        .iter()
        .map(|&n| Ok((n, partition_pressure_numeric(n, &phi, bset, budget)?)))
        .collect::<Result<Vec<_>, ThermoError>>()?;
    Ok(PressureReport {
        closed_form: pressure_closed_form(a00, a01, a1, d),
        numeric_upper,
        d_interval: d,
    })
}
