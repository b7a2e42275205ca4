//! Values computed once by an independent brute-force script (direct word
//! enumeration, and orbit counting of `eta` over one period) and frozen.

use bfree_core::measures::{contains_ratio, mirsky_crt_oracle, mirsky_eval};
use bfree_core::thermo::log2_partition_sum;
use bfree_core::words::count_language;
use bfree_core::{BSet, Budget, Potential2};

#[test]
fn language_counts_for_two_three() {
    let b = BSet::finite(vec![2, 3]).unwrap();
    let expect = [(6, 13), (12, 73), (18, 337), (24, 1441), (30, 5953), (36, 24193)];
    for (n, count) in expect {
        assert_eq!(count_language(n, &b, Budget::default()).unwrap(), count, "n={n}");
    }
}

#[test]
fn mirsky_values() {
    // (word, value for {2, 3, 5}, value for {2, 9, 25}).
    let table = [
        ("1", (4, 15), (32, 75)),
        ("00", (7, 15), (11, 75)),
        ("010", (4, 15), (32, 75)),
        ("0110", (0, 1), (0, 1)),
        ("10101", (0, 1), (22, 75)),
        ("00000", (1, 15), (1, 225)),
    ];
    let a = BSet::finite(vec![2, 3, 5]).unwrap();
    let b = BSet::finite(vec![2, 9, 25]).unwrap();
    for (w, x, y) in table {
        let c = w.parse().unwrap();
        for (set, (num, den)) in [(&a, x), (&b, y)] {
            let exact = mirsky_crt_oracle(set, &c).unwrap();
            assert_eq!((*exact.numer(), *exact.denom()), (num, den), "{w}");
            assert!(contains_ratio(&mirsky_eval(set, &c).unwrap(), num, den), "{w}");
        }
    }
}

#[test]
fn partition_sums_for_the_ones_indicator() {
    let b = BSet::finite(vec![2, 3]).unwrap();
    let phi = Potential2::indicator_one();
    for (n, value) in [(6, 5.20945336562895), (12, 8.758223214726724), (18, 12.040632200562253)] {
        let got = log2_partition_sum(n, &phi, &b, Budget::default()).unwrap();
        assert!((got - value).abs() < 1e-12, "n={n}: {got}");
    }
}
