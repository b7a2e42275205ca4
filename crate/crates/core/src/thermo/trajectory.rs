//! The Gibbs ratio along max-ones blocks.
//!
//! For `phi = a00 1[00] + a01 1[01] + a1 1[1]` with `a1 >= max(a00, a01)`
//! and `2 a00 <= a1 + a01`, let `C_n` be a block of length `n` with the
//! most ones. A Gibbs measure would keep
//! `kappa(C_n) 2^(n P - S_n(C_n))` bounded away from zero, where `S_n` is
//! the Birkhoff sup and `kappa = nu_eta * B_{p,1-p}`. Along `C_n` that ratio
//! is at most `nu_eta(C_n) 2^(4 |phi|)`, and `nu_eta(C_n)` decays.

use alloc::vec::Vec;

use crate::bset::BSet;
use crate::interval::{add_dir, Interval};
use crate::measures::{convolve_eval, CylinderMeasure, MirskyMeasure};
use crate::thermo::closed::{equilibrium_p, pressure_closed_form};
use crate::thermo::numeric::{birkhoff_maximizer, birkhoff_sup};
use crate::thermo::{Potential2, ThermoError};
use crate::words::{max_ones, MaxOnesMethod, Word, WordError};
use crate::Budget;

/// Node budget for the optional search of a Birkhoff maximizer per row.
pub const MAXIMIZER_BUDGET: u64 = 2_000_000;

/// Relative allowance for rounding in the row check.
const ROUNDING_ALLOWANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub n: usize,
    pub word: Word,
    pub ones: usize,
    pub nu: Interval,
    pub kappa: Interval,
    pub birkhoff: f64,
    pub ratio: Interval,
    /// `nu.hi 2^(4|phi| + n width(P))`, allowing for rounding.
    pub bound: f64,
    pub within_bound: bool,
    /// `#1 C_n - #1 x^(n)` for a Birkhoff maximizer `x^(n)`, when one was
    /// found within [`MAXIMIZER_BUDGET`].
    pub ones_gap: Option<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GibbsTrajectory {
    pub p: f64,
    pub pressure: Interval,
    pub d: Interval,
    pub rows: Vec<TrajectoryRow>,
}

impl GibbsTrajectory {
    /// Whether `nu(C_n).hi` strictly decreases along the rows.
    pub fn nu_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].nu.hi < w[0].nu.hi)
    }

    pub fn all_within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.within_bound)
    }
}

/// Builds the trajectory over `n_grid`.
pub fn gibbs_trajectory(
    a00: f64,
    a01: f64,
    a1: f64,
    bset: &BSet,
    n_grid: &[usize],
    budget: Budget,
) -> Result<GibbsTrajectory, ThermoError> {
    if a1 < a00.max(a01) {
        return Err(ThermoError::PreconditionViolated("a1 >= max(a00, a01)"));
    }
    if 2.0 * a00 > a1 + a01 {
        return Err(ThermoError::PreconditionViolated("2 a00 <= a1 + a01"));
    }
    if !bset.contains(2) {
        return Err(ThermoError::PreconditionViolated("2 in B"));
    }
    let phi = Potential2::family(a00, a01, a1);
    let d = bset.free_density();
    let p = equilibrium_p(a00, a01, a1);
    let pressure = pressure_closed_form(a00, a01, a1, d);
    let p_mid = pressure.mid();
    let nu = MirskyMeasure::new(bset.clone());
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        if n == 0 {
            return Err(WordError::Empty.into());
        }
        let block = max_ones(n, bset, MaxOnesMethod::Exact, budget)?;
        let word = block.witness;
        let nu_c = nu.eval(&word)?;
        let kappa = convolve_eval(&nu, bset, p, &word, budget)?;
        let birkhoff = birkhoff_sup(&word, &phi, bset)?;
        let exponent = Interval::point(n as f64) * Interval::point(p_mid) - Interval::point(birkhoff);
        let ratio = kappa * exponent.exp2();
        let slack = add_dir(4.0 * phi.norm(), n as f64 * pressure.width(), true);
        let bound = nu_c.hi * libm::exp2(slack) * (1.0 + ROUNDING_ALLOWANCE);
        let ones_gap = match birkhoff_maximizer(n, &phi, bset, Budget::nodes(MAXIMIZER_BUDGET)) {
            Ok((x, _)) => Some(block.count as i64 - x.ones_count() as i64),
            Err(ThermoError::Word(WordError::EnumerationBudgetExceeded(_))) => None,
            Err(ThermoError::Word(WordError::WordTooLong { .. })) => None,
            Err(e) => return Err(e),
        };
        rows.push(TrajectoryRow {
            n,
            ones: block.count,
            word,
            nu: nu_c,
            kappa,
            birkhoff,
            ratio,
            bound,
            within_bound: ratio.hi <= bound,
            ones_gap,
        });
    }
    Ok(GibbsTrajectory { p, pressure, d, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn preconditions() {
        let b = BSet::finite(vec![2, 9, 25, 49]).unwrap();
        assert!(matches!(
            gibbs_trajectory(1.0, 0.0, 0.5, &b, &[4], Budget::default()),
            Err(ThermoError::PreconditionViolated(_))
        ));
        assert!(matches!(
            gibbs_trajectory(1.0, 0.0, 1.5, &b, &[4], Budget::default()),
            Err(ThermoError::PreconditionViolated(_))
        ));
        let odd = BSet::finite(vec![3, 5]).unwrap();
        assert!(matches!(
            gibbs_trajectory(0.0, 0.0, 1.0, &odd, &[4], Budget::default()),
            Err(ThermoError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn single_symbol_row() {
        let b = BSet::validate(vec![2, 9, 25, 49], 0.05, Some(50)).unwrap();
        let t = gibbs_trajectory(0.0, 0.0, 1.0, &b, &[1], Budget::default()).unwrap();
        let row = &t.rows[0];
        assert_eq!(row.word.to_string(), "1");
        let d = b.free_density();
        let keep = 1.0 - t.p;
        assert!(row.kappa.lo <= d.hi * keep && row.kappa.hi >= d.lo * keep);
        let expect_hi = d.hi * keep * libm::exp2(t.pressure.mid() - 1.0);
        assert!((row.ratio.hi - expect_hi).abs() < 1e-12);
        assert!(row.within_bound);
    }

    #[test]
    fn small_trajectory_decays() {
        let b = BSet::finite(vec![2, 9, 25, 49]).unwrap();
        let t = gibbs_trajectory(0.0, 0.0, 1.0, &b, &[4, 8, 16, 32], Budget::default()).unwrap();
        assert!(t.nu_strictly_decreasing(), "{:?}", t.rows.iter().map(|r| r.nu).collect::<Vec<_>>());
        assert!(t.all_within_bound());
        for row in &t.rows {
            assert!(row.ones as f64 >= row.n as f64 * t.d.lo - 1.0);
            if let Some(gap) = row.ones_gap {
                assert!(gap >= 0);
            }
        }
    }
}
