use proptest::prelude::*;
use sgo_core::combin::falling_poly_coeffs;
use sgo_core::grid::Compositions;
use sgo_core::identities::{verify_identity, Identity};
use sgo_core::rational::int;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn stirling_multi_random((alpha, d) in (1usize..=4, 1u32..=5).prop_flat_map(|(n, k)| {
        let all: Vec<Vec<u32>> = Compositions::new(n, k).collect();
        (prop::sample::select(all), (k + 1)..=6)
    })) {
        let c = verify_identity(&Identity::StirlingMulti { alpha, d }).unwrap();
        prop_assert!(c.holds, "{:?}", c);
    }

    #[test]
    fn vandermonde_chu_random(x in prop::collection::vec(-30i64..=30, 1..=4), d in 0u32..=7) {
        let c = verify_identity(&Identity::VandermondeChu { x, d }).unwrap();
        prop_assert!(c.holds, "{:?}", c);
    }

    #[test]
    fn multinomial_random(x in prop::collection::vec((-30i64..=30, 1i64..=7), 1..=4), d in 0u32..=6) {
        let x = x.into_iter().map(|(p, q)| sgo_core::rational::ratio(p, q)).collect();
        let c = verify_identity(&Identity::Multinomial { x, d }).unwrap();
        prop_assert!(c.holds, "{:?}", c);
    }
}

#[test]
fn falling_poly_vanishes_on_small_integers() {
    for d in 2..=10u32 {
        let c = falling_poly_coeffs(d).unwrap();
        for x in 1..d {
            assert_eq!(c.eval(&int(x)), int(0), "d={d} x={x}");
        }
    }
}
