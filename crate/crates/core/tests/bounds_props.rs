mod common;

use common::poly;
use num::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use sgo_core::bounds::{
    bound_coefficient, cubic_threshold_met, random_polynomial, refined_gap, rho_interval,
    witness_sweep, BoundChecker, BoundKind, EnclosureParams, DEFAULT_WITNESS_GRID_LIMIT,
};
use sgo_core::combin::falling_int;
use sgo_core::rational::ratio;
use sgo_core::Rational;

fn coef(kind: BoundKind, d: u32, r: u64, m: Option<u64>) -> Rational {
    bound_coefficient(kind, d, r, m).coefficient.unwrap()
}

#[test]
fn quadratic_refinement_chain() {
    for m in 1..=40u64 {
        for r in 1..=40u64 {
            let kls = coef(BoundKind::KlsQuad, 2, r, None);
            if r <= m {
                assert!(coef(BoundKind::QuadRefined, 2, r, Some(m)) <= kls);
            } else {
                assert!(coef(BoundKind::QuadDenom, 2, r, Some(m)) <= kls);
            }
        }
    }
}

#[test]
fn general_refined_below_kls_general() {
    // 1 − r^{d̲}(km)^d/(r^d (km)^{d̲}) ≤ 1 − r^{d̲}/r^d whenever r ≤ km
    for d in 1..=5u32 {
        for m in 1..=12u64 {
            for k in 1..=4u64 {
                if k * m < u64::from(d) {
                    continue;
                }
                for r in 1..=k * m {
                    let refined = refined_gap(r, k * m, d);
                    let plain = Rational::one() - ratio(falling_int(r, d.into()), r.pow(d));
                    assert!(refined <= plain, "d={d} r={r} km={}", k * m);
                }
            }
        }
    }
    for d in 1..=5u32 {
        for m in u64::from(d)..=12 {
            for r in 1..=m {
                let refined = coef(BoundKind::GeneralRefined, d, r, Some(m));
                assert!(
                    refined <= coef(BoundKind::KlsGeneral, d, r, None),
                    "d={d} r={r} m={m}"
                );
            }
        }
    }
}

#[test]
fn cubic_threshold_matches_float_and_ordering() {
    for m in 3..=60u64 {
        for r in 1..=m {
            let exact = cubic_threshold_met(r, m);
            let t = 1.0 + (m as f64 - 1.0) / ((2.0 * m as f64).sqrt() - 1.0);
            let float = r as f64 >= t;
            if (r as f64 - t).abs() > 1e-9 {
                assert_eq!(exact, float, "r={r} m={m}");
            }
            if exact && r >= 2 {
                assert!(
                    coef(BoundKind::CubicRefined, 3, r, Some(m))
                        <= coef(BoundKind::CubicKls, 3, r, None),
                    "r={r} m={m}"
                );
            }
        }
    }
}

#[test]
fn witnesses_hold_on_random_polynomials() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let polys: Vec<_> = (0..40)
        .map(|_| random_polynomial(&mut rng, 4, 3, 9))
        .collect();
    let ws = witness_sweep(&polys, 6, 2).unwrap();
    assert!(ws.iter().any(|w| w.applicable()));
    for w in &ws {
        assert!(w.holds(), "{w:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bound_witnesses_hold(f in poly(4, 3, 9), m in 1u32..=6) {
        let mut checker = BoundChecker::new(&f, 1, DEFAULT_WITNESS_GRID_LIMIT);
        for r in 1..=m {
            for w in checker.check_all(r, m).unwrap() {
                prop_assert!(w.holds(), "{:?}", w);
            }
        }
    }

    #[test]
    fn rho_interval_is_within_unit(f in poly(3, 3, 9), r in 1u32..=6) {
        let params = EnclosureParams { elevation: 2, grids: vec![12], ..Default::default() };
        if let Ok(rho) = rho_interval(&f, r, &params) {
            prop_assert!(rho.lo >= Rational::zero());
            prop_assert!(rho.hi <= Rational::one());
            prop_assert!(rho.lo <= rho.hi);
        }
    }
}

#[test]
fn rho_sum_of_squares_exact() {
    let f = sgo_core::HomogeneousPolynomial::sum_of_squares(4);
    let params = EnclosureParams {
        known_min: Some(ratio(1, 4)),
        known_max: Some(ratio(1, 1)),
        ..Default::default()
    };
    let rho = rho_interval(&f, 2, &params).unwrap();
    assert!(rho.is_point());
    assert_eq!(rho.lo, ratio(1, 3));
    for r in [4, 8, 12] {
        assert_eq!(rho_interval(&f, r, &params).unwrap().lo, Rational::zero());
    }
}
