use betakit_core::cylinders::{check_length_bounds, cylinder_with_precision, shares_endpoint};
use betakit_core::expansion::digits_of_one;
use betakit_core::recurrence::tau;
use betakit_core::words::{adjacent_self_admissible, count_admissible, is_self_admissible, lex_compare, Ceiling, Direction};
use betakit_core::{Beta, Verdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn word(max_len: usize, max_digit: u32) -> impl Strategy<Value = Vec<u32>> {
    (1..=max_digit, prop::collection::vec(0..=max_digit, 0..max_len)).prop_map(|(h, t)| {
        let mut v = vec![h];
        v.extend(t);
        v
    })
}

fn self_admissible(max_len: usize, max_digit: u32) -> impl Strategy<Value = Vec<u32>> {
    word(max_len, max_digit).prop_filter("self-admissible", |w| is_self_admissible(w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn self_admissible_iff_expansion_of_its_root(w in word(8, 2)) {
        let beta = Beta::from_word(&w);
        prop_assume!(beta.is_ok());
        let e = digits_of_one(&beta.unwrap(), w.len()).unwrap();
        prop_assert_eq!(is_self_admissible(&w), e.raw_digits == w);
    }

    #[test]
    fn expansion_of_one_increases_with_beta(a in 1001u32..3000, b in 1001u32..3000) {
        prop_assume!(a != b);
        let (lo, hi) = (a.min(b), a.max(b));
        let e = |v: u32| {
            let beta = Beta::rational(BigRational::new(BigInt::from(v), BigInt::from(1000))).unwrap();
            digits_of_one(&beta, 40).unwrap().raw_digits
        };
        prop_assert!(lex_compare(&e(lo), &e(hi)).is_le());
    }

    #[test]
    fn renyi_bounds_for_word_roots(w in self_admissible(6, 2), n in 1usize..12) {
        let beta = Beta::from_word(&w);
        prop_assume!(beta.is_ok());
        let b = beta.unwrap().to_f64();
        let count = count_admissible(&Ceiling::from_parry_word(&w).unwrap(), n).unwrap() as f64;
        let slack = 1e-9 * count.max(1.0);
        prop_assert!(b.powi(n as i32) <= count + slack);
        prop_assert!(count <= b.powi(n as i32 + 1) / (b - 1.0) + slack);
    }

    #[test]
    fn successor_cylinders_share_endpoints(w in self_admissible(9, 2)) {
        let next = adjacent_self_admissible(&w, Direction::Succ).unwrap();
        prop_assume!(next.is_some());
        let next = next.unwrap();
        prop_assume!(next[0] <= 2);
        let a = cylinder_with_precision(&w, 160).unwrap();
        let b = cylinder_with_precision(&next, 160).unwrap();
        prop_assert_eq!(shares_endpoint(&a, &b), Some(true));
        prop_assert!(a.left().enclosure().hi() <= b.left().enclosure().lo());
    }

    #[test]
    fn length_bounds_hold(w in self_admissible(10, 2)) {
        let c = cylinder_with_precision(&w, 192).unwrap();
        prop_assume!(!c.is_boundary());
        prop_assert_eq!(check_length_bounds(&c, 192).unwrap(), Verdict::Holds);
        prop_assert_eq!(c.is_regular(), tau(&w) == w.len());
    }
}
