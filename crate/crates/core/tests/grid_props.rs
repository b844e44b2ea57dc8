mod common;

use common::poly;
use proptest::prelude::*;
use sgo_core::grid::{
    brute_force_grid_min, composition_count, grid_maximize, grid_minimize, grid_minimize_with,
    unrank, Compositions, GridOptions,
};
use sgo_core::rational::ratio;
use sgo_core::HomogeneousPolynomial;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refinement_on_divisor_chains(f in poly(4, 3, 9), r in 1u32..=5) {
        let base = grid_minimize(&f, r).value;
        prop_assert!(grid_minimize(&f, 2 * r).value <= base);
        prop_assert!(grid_minimize(&f, 3 * r).value <= base);
        let top = grid_maximize(&f, r).value;
        prop_assert!(grid_maximize(&f, 2 * r).value >= top);
    }

    #[test]
    fn grid_value_above_bernstein_lower_bound(f in poly(4, 3, 9), r in 1u32..=8, k in 0u32..4) {
        let (lower, upper) = f.bernstein_enclosure(k);
        prop_assert!(grid_minimize(&f, r).value >= lower.lo);
        prop_assert!(grid_maximize(&f, r).value <= upper.hi);
    }

    #[test]
    fn parallel_equals_sequential(f in poly(5, 3, 3), r in 1u32..=10) {
        let seq = grid_minimize_with(&f, r, GridOptions { parallel: false, ..Default::default() });
        let par = grid_minimize_with(&f, r, GridOptions { parallel: true, ..Default::default() });
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn fast_path_equals_brute_force(f in poly(4, 3, 9), r in 1u32..=10) {
        let res = grid_minimize(&f, r);
        prop_assert_eq!(&res.value, &brute_force_grid_min(&f, r).unwrap());
        prop_assert_eq!(u128::from(res.evaluations), composition_count(f.n(), r));
        prop_assert!(res.minimizers.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(res.tie_count as usize >= res.minimizers.len());
        for x in res.points() {
            prop_assert_eq!(f.evaluate(&x).unwrap(), res.value.clone());
        }
    }

    #[test]
    fn unrank_matches_iterator(n in 1usize..=5, r in 0u32..=7) {
        let all: Vec<Vec<u32>> = Compositions::new(n, r).collect();
        prop_assert_eq!(all.len() as u128, composition_count(n, r));
        for (i, a) in all.iter().enumerate() {
            prop_assert_eq!(unrank(n, r, i as u128), Some(a.clone()));
        }
        prop_assert_eq!(unrank(n, r, all.len() as u128), None);
    }
}

#[test]
fn large_coefficients_take_the_wide_path() {
    // |c|·r^d far above 2^120 forces arbitrary-precision evaluation
    let big = ratio(num::BigInt::from(10).pow(40), 1);
    let f = HomogeneousPolynomial::new(
        2,
        2,
        [
            (sgo_core::Exponent(vec![2, 0]), big.clone()),
            (sgo_core::Exponent(vec![1, 1]), -big.clone() * ratio(5, 2)),
            (sgo_core::Exponent(vec![0, 2]), big.clone() / ratio(2, 1)),
        ],
    )
    .unwrap();
    for r in [1, 7, 16] {
        assert_eq!(
            grid_minimize(&f, r).value,
            brute_force_grid_min(&f, r).unwrap()
        );
    }
}
