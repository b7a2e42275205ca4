use bfree_core::measures::{
    contains_ratio, convolve_eval, mirsky_crt_oracle, mirsky_eval_with, MirskyMeasure, MirskyMethod,
};
use bfree_core::odometer::{advance, phi_window, OdometerPoint};
use bfree_core::thermo::{equilibrium_residual, log2_partition_sum};
use bfree_core::words::{count_language, enumerate_language, is_admissible, max_ones, supersets, MaxOnesMethod};
use bfree_core::{BSet, Budget, CylinderMeasure, Interval, Potential2, Word};
use num_rational::Ratio;
use proptest::prelude::*;

const SETS: &[&[u64]] = &[
    &[2],
    &[3],
    &[2, 3],
    &[2, 5],
    &[3, 4],
    &[2, 3, 5],
    &[4, 9, 25],
    &[2, 9, 25, 49],
    &[3, 4, 5, 7],
    &[2, 3, 5, 7],
];

fn bset() -> impl Strategy<Value = BSet> {
    prop::sample::select(SETS).prop_map(|e| BSet::finite(e.to_vec()).unwrap())
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    (1..=max_len).prop_flat_map(|n| prop::collection::vec(any::<bool>(), n).prop_map(|b| Word::from_bits(&b)))
}

fn exact(b: &BSet, c: &Word) -> Ratio<u128> {
    mirsky_crt_oracle(b, c).unwrap()
}

fn close(a: Interval, b: Interval) -> bool {
    let tol = 1e-13;
    a.lo <= b.hi + tol && b.lo <= a.hi + tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn language_is_hereditary(b in bset(), w in word(20), mask in any::<u32>()) {
        let sub = Word::from_u128(w.to_u128().unwrap() & mask as u128, w.len());
        if is_admissible(&w, &b) {
            prop_assert!(is_admissible(&sub, &b));
        }
    }

    #[test]
    fn counts_are_submultiplicative(b in bset(), n in 1usize..10, m in 1usize..10) {
        let c = |k| count_language(k, &b, Budget::default()).unwrap();
        prop_assert!(c(n + m) <= c(n) * c(m));
    }

    #[test]
    fn supersets_dominate(b in bset(), w in word(10)) {
        if !is_admissible(&w, &b) {
            prop_assert_eq!(supersets(&w, &b, Budget::default()).unwrap().count(), 0);
            return Ok(());
        }
        let found: Vec<Word> = supersets(&w, &b, Budget::default()).unwrap().collect();
        let expect = enumerate_language(w.len(), &b, usize::MAX, Budget::default())
            .unwrap()
            .filter(|x| w.le(x).unwrap())
            .count();
        prop_assert_eq!(found.len(), expect);
        for x in &found {
            prop_assert!(w.le(x).unwrap() && is_admissible(x, &b));
        }
    }

    #[test]
    fn max_ones_matches_enumeration(b in bset(), n in 1usize..14) {
        let best = enumerate_language(n, &b, usize::MAX, Budget::default())
            .unwrap()
            .map(|w| w.ones_count())
            .max()
            .unwrap();
        let got = max_ones(n, &b, MaxOnesMethod::Exact, Budget::default()).unwrap();
        prop_assert_eq!(got.count, best);
        prop_assert!(is_admissible(&got.witness, &b));
        prop_assert_eq!(got.witness.ones_count(), best);
    }

    #[test]
    fn mirsky_is_shift_consistent(b in bset(), c in word(9)) {
        let total = exact(&b, &c);
        prop_assert_eq!(exact(&b, &c.pushed(false)) + exact(&b, &c.pushed(true)), total);
        let left = |s: bool| {
            let mut bits = vec![s];
            bits.extend(c.bits());
            exact(&b, &Word::from_bits(&bits))
        };
        prop_assert_eq!(left(false) + left(true), total);
    }

    #[test]
    fn mirsky_routes_agree(b in bset(), c in word(12)) {
        let r = exact(&b, &c);
        for method in [MirskyMethod::InclusionExclusion, MirskyMethod::ResidueDp, MirskyMethod::Auto] {
            let iv = mirsky_eval_with(&b, &c, method).unwrap();
            prop_assert!(contains_ratio(&iv, *r.numer(), *r.denom()), "{:?} {} {}", method, iv, r);
        }
    }

    #[test]
    fn convolution_is_shift_consistent(b in bset(), c in word(7), q in 0.0f64..=1.0) {
        let nu = MirskyMeasure::new(b.clone());
        let k = |w: &Word| convolve_eval(&nu, &b, q, w, Budget::default()).unwrap();
        let sum = k(&c.pushed(false)) + k(&c.pushed(true));
        prop_assert!(close(sum, k(&c)), "{} vs {}", sum, k(&c));
    }

    #[test]
    fn equilibrium_residual_is_zero(a00 in -2.0f64..2.0, a01 in -2.0f64..2.0, a1 in -2.0f64..2.0, d in 0.0f64..0.5) {
        let r = equilibrium_residual(a00, a01, a1, Interval::point(d));
        prop_assert!(r.contains(0.0) || r.mag() <= 1e-13);
        prop_assert!(r.width() <= 1e-12 && r.mag() <= 1e-12);
    }

    #[test]
    fn partition_sums_are_subadditive(
        v in prop::array::uniform4(-2.0f64..2.0),
        b in bset(),
        n in 1usize..8,
        m in 1usize..8,
    ) {
        let phi = Potential2::new([[v[0], v[1]], [v[2], v[3]]]);
        let z = |k| log2_partition_sum(k, &phi, &b, Budget::default()).unwrap();
        prop_assert!(z(n + m) <= z(n) + z(m) + 1e-9);
    }

    #[test]
    fn odometer_coding_is_equivariant(
        b in bset(),
        seed in prop::collection::vec(any::<u64>(), 4),
        t in -1000i64..1000,
        a in -50i64..50,
        len in 1i64..40,
    ) {
        let residues: Vec<u64> = b.elements().iter().zip(&seed).map(|(&e, &s)| s % e).collect();
        let omega = OdometerPoint::new(&b, residues).unwrap();
        let moved = advance(&b, &omega, t);
        prop_assert_eq!(
            phi_window(&b, &moved, a, a + len - 1).unwrap(),
            phi_window(&b, &omega, a + t, a + t + len - 1).unwrap()
        );
    }
}

#[test]
fn mirsky_is_normalized() {
    for e in SETS {
        let b = BSet::finite(e.to_vec()).unwrap();
        for n in 1..=8 {
            let mut total = Ratio::from_integer(0u128);
            for m in 0u128..1 << n {
                total += exact(&b, &Word::from_u128(m, n));
            }
            assert_eq!(total, Ratio::from_integer(1), "{e:?} n={n}");
        }
    }
}

#[test]
fn measure_trait_agrees_with_free_functions() {
    let b = BSet::finite(vec![2, 3, 5]).unwrap();
    let nu = MirskyMeasure::new(b.clone());
    for m in 0u128..1 << 6 {
        let c = Word::from_u128(m, 6);
        assert_eq!(nu.eval(&c).unwrap(), mirsky_eval_with(&b, &c, MirskyMethod::Auto).unwrap());
    }
}
