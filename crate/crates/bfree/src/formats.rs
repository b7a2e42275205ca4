//! JSON and CSV shapes of the data exchanged by the command line.

use std::io::Write;

use bfree_core::thermo::GibbsTrajectory;
use bfree_core::{BSet, BSetError, EtaWindow, Interval};
use serde::{Deserialize, Serialize};

/// `{"elements": [...], "tail_bound": x, "complete_below": n | null}`;
/// `null` means every element is listed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BSetJson {
    pub elements: Vec<u64>,
    #[serde(default)]
    pub tail_bound: f64,
    #[serde(default)]
    pub complete_below: Option<u64>,
}

impl BSetJson {
    pub fn into_bset(self) -> Result<BSet, BSetError> {
        BSet::validate(self.elements, self.tail_bound, self.complete_below)
    }
}

impl From<&BSet> for BSetJson {
    fn from(b: &BSet) -> Self {
        BSetJson {
            elements: b.elements().to_vec(),
            tail_bound: b.tail_bound(),
            complete_below: b.complete_below(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaWindowJson {
    pub start: i64,
    pub bits: String,
    pub exact: bool,
}

impl From<&EtaWindow> for EtaWindowJson {
    fn from(w: &EtaWindow) -> Self {
        EtaWindowJson {
            start: w.start,
            bits: w.word.to_string(),
            exact: w.exact,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lo: f64,
    pub hi: f64,
}

impl From<Interval> for IntervalJson {
    fn from(iv: Interval) -> Self {
        IntervalJson { lo: iv.lo, hi: iv.hi }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub word: String,
    pub lo: f64,
    pub hi: f64,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub word: String,
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryCsvRow {
    pub n: usize,
    pub word: String,
    pub nu_lo: f64,
    pub nu_hi: f64,
    pub kappa_lo: f64,
    pub kappa_hi: f64,
    pub ratio_lo: f64,
    pub ratio_hi: f64,
}

pub fn trajectory_rows(t: &GibbsTrajectory) -> Vec<TrajectoryCsvRow> {
    t.rows
        .iter()
        .map(|r| TrajectoryCsvRow {
            n: r.n,
            word: r.word.to_string(),
            nu_lo: r.nu.lo,
            nu_hi: r.nu.hi,
            kappa_lo: r.kappa.lo,
            kappa_hi: r.kappa.hi,
            ratio_lo: r.ratio.lo,
            ratio_hi: r.ratio.hi,
        })
        .collect()
}

/// Writes the trajectory as CSV with a header row and LF line endings.
pub fn write_trajectory_csv<W: Write>(t: &GibbsTrajectory, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for row in trajectory_rows(t) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bset_round_trip() {
        let json = r#"{"elements":[2,9,25,49],"tail_bound":0.05,"complete_below":50}"#;
        let parsed: BSetJson = serde_json::from_str(json).unwrap();
        let b = parsed.clone().into_bset().unwrap();
        assert_eq!(BSetJson::from(&b), parsed);
        let finite: BSetJson = serde_json::from_str(r#"{"elements":[2,3],"tail_bound":0,"complete_below":null}"#).unwrap();
        let b = finite.into_bset().unwrap();
        assert!(b.is_exactly_finite());
        assert_eq!(serde_json::to_string(&BSetJson::from(&b)).unwrap(), r#"{"elements":[2,3],"tail_bound":0.0,"complete_below":null}"#);
        let bad: BSetJson = serde_json::from_str(r#"{"elements":[2,4]}"#).unwrap();
        assert_eq!(bad.into_bset(), Err(BSetError::NotCoprime(2, 4)));
    }

    #[test]
    fn eta_json() {
        let b = BSet::finite(vec![2]).unwrap();
        let w = bfree_core::words::eta_window(&b, 1, 6).unwrap();
        let j = serde_json::to_string(&EtaWindowJson::from(&w)).unwrap();
        assert_eq!(j, r#"{"start":1,"bits":"101010","exact":true}"#);
    }
}
