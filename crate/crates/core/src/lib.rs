//! Certified computations for `B`-free hereditary subshifts.
//!
//! For a pairwise coprime set `B` with `sum 1/b < inf`, the crate counts and
//! enumerates the language of `X_B`, evaluates the Mirsky measure and its
//! multiplicative convolutions with Bernoulli masks, and computes pressures,
//! entropies, equilibrium parameters and Gibbs certificates for potentials
//! depending on two consecutive symbols. Values that depend on the infinite
//! tail of `B` are returned as [`Interval`]s that contain the true value.
//!
//! All logarithms, entropies and pressures are base 2.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bset;
pub mod interval;
pub mod measures;
pub mod odometer;
pub mod rational;
pub mod thermo;
pub mod words;

pub use bset::{BSet, BSetError};
pub use interval::Interval;
pub use measures::{CylinderMeasure, MeasureError};
pub use thermo::{Potential2, ThermoError};
pub use words::{EtaWindow, Word, WordError};

/// Limits on exhaustive searches, counted in visited search-tree nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const fn nodes(max_nodes: u64) -> Budget {
        Budget { max_nodes }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_nodes: 200_000_000 }
    }
}
