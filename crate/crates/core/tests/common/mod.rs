#![allow(dead_code)]

use proptest::prelude::*;
use sgo_core::grid::Compositions;
use sgo_core::rational::ratio;
use sgo_core::{Exponent, HomogeneousPolynomial, Rational};

/// Homogeneous polynomial with `n ≤ max_n`, `1 ≤ d ≤ max_d` and integer
/// coefficients in `[−coef, coef]`, one per monomial of `I(n,d)`.
pub fn poly(max_n: usize, max_d: u32, coef: i64) -> impl Strategy<Value = HomogeneousPolynomial> {
    (1..=max_n, 1..=max_d).prop_flat_map(move |(n, d)| {
        let monos: Vec<Vec<u32>> = Compositions::new(n, d).collect();
        prop::collection::vec(-coef..=coef, monos.len()).prop_map(move |cs| {
            let terms = monos
                .iter()
                .zip(cs)
                .map(|(a, c)| (Exponent(a.clone()), ratio(c, 1)));
            HomogeneousPolynomial::new(n, d, terms).unwrap()
        })
    })
}

/// Polynomial on exactly `n` variables.
pub fn poly_n(n: usize, max_d: u32, coef: i64) -> impl Strategy<Value = HomogeneousPolynomial> {
    (1..=max_d).prop_flat_map(move |d| {
        let monos: Vec<Vec<u32>> = Compositions::new(n, d).collect();
        prop::collection::vec(-coef..=coef, monos.len()).prop_map(move |cs| {
            let terms = monos
                .iter()
                .zip(cs)
                .map(|(a, c)| (Exponent(a.clone()), ratio(c, 1)));
            HomogeneousPolynomial::new(n, d, terms).unwrap()
        })
    })
}

/// Rational point on the simplex from nonnegative weights (not all zero).
pub fn simplex_point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(0u32..50, n)
        .prop_filter("nonzero weights", |w| w.iter().any(|&v| v > 0))
        .prop_map(|w| {
            let total: u32 = w.iter().sum();
            w.into_iter().map(|v| ratio(v, total)).collect()
        })
}

/// Urn with `n` colours, `m = Σ counts ≤ max_m` (`m ≥ 1`), and `1 ≤ r ≤ m`.
pub fn urn(max_n: usize, max_m: u64) -> impl Strategy<Value = (Vec<u64>, u64)> {
    (1..=max_n)
        .prop_flat_map(move |n| prop::collection::vec(0..=max_m, n))
        .prop_filter("1 <= m <= max_m", move |c| {
            let m: u64 = c.iter().sum();
            (1..=max_m).contains(&m)
        })
        .prop_flat_map(|c| {
            let m: u64 = c.iter().sum();
            (Just(c), 1..=m)
        })
}
