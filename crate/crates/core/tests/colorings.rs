use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use udcert::colorings::{
    hex7_color, hex7_side, hex_center, qmod3_color, slab7_condition, stripe_color, verify_scheme,
    verify_scheme_parallel, ColoringScheme, SAME_COLOR_TRANSLATIONS,
};
use udcert::scalar::Scalar;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn slab7_condition_examples() {
    let lt_one = |k, e: Scalar| slab7_condition(k, &e).to_f64() < 1.0;
    assert!(lt_one(1, Scalar::Real(0.3)));
    assert!(lt_one(2, Scalar::Real(0.46)));
    assert!(!lt_one(2, Scalar::Real(0.5)));
    assert!(ColoringScheme::slab7(2, 0.5).is_err());
}

#[test]
fn stripe_and_qmod3_examples() {
    let c = |x: BigRational| stripe_color(&Scalar::Exact(x), 3).unwrap();
    assert_eq!((c(q(1, 10)), c(q(6, 10)), c(q(12, 10))), (0, 1, 2));
    assert_eq!(c(q(1, 2)), 1);
    assert_eq!(qmod3_color(&q(1, 2)), 0);
    assert_eq!(qmod3_color(&q(2, 3)), 0);
    assert_eq!(qmod3_color(&(q(2, 3) + q(1, 1_000_000))), 1);
}

#[test]
fn hex7_examples() {
    assert_eq!(hex7_color([0.0, 0.0]), 0);
    let side = hex7_side();
    for &(a, b) in &SAME_COLOR_TRANSLATIONS {
        let t = hex_center(side, (a, b));
        for p in [[0.01, 0.02], [0.2, -0.1], [-0.15, 0.05]] {
            assert_eq!(hex7_color(p), hex7_color([p[0] + t[0], p[1] + t[1]]));
        }
    }
}

#[test]
fn hex7_sampling_avoids_the_forbidden_band() {
    let r = verify_scheme(&ColoringScheme::hex7(), 1_000_000, 42).unwrap();
    assert_eq!(r.monochromatic, 0);
    // Same-color distances never fall strictly between 2/sqrt(7) and 1.
    assert_eq!(r.same_color_buckets_between(0.8, 1.0), 0);
}

#[test]
fn exact_schemes_at_maximal_height() {
    for colors in [3, 4] {
        let r = verify_scheme(&ColoringScheme::stripe_max(colors, 1).unwrap(), 50_000, 7).unwrap();
        assert!(r.exact && r.pass(), "{r}");
    }
    let r = verify_scheme(&ColoringScheme::qmod3(q(1, 10)).unwrap(), 50_000, 7).unwrap();
    assert!(r.exact && r.pass(), "{r}");
}

#[test]
fn parallel_counts_depend_only_on_seed_and_workers() {
    let scheme = ColoringScheme::hex_with_side(0.5, 2, 0.46);
    let a = verify_scheme_parallel(&scheme, 200_000, 9, 4).unwrap();
    let b = verify_scheme_parallel(&scheme, 200_000, 9, 4).unwrap();
    assert_eq!(a.monochromatic, b.monochromatic);
    assert!(a.monochromatic > 0);
}

proptest! {
    #[test]
    fn stripe3_unit_shift_changes_color(n in -10_000i64..10_000, d in 1i64..500) {
        let x = q(n, d);
        let a = stripe_color(&Scalar::Exact(x.clone()), 3).unwrap();
        let b = stripe_color(&Scalar::Exact(x + q(1, 1)), 3).unwrap();
        prop_assert_ne!(a, b);
    }

    #[test]
    fn qmod3_has_period_two(n in -10_000i64..10_000, d in 1i64..500) {
        let x = q(n, d);
        prop_assert_eq!(qmod3_color(&x), qmod3_color(&(x.clone() + q(2, 1))));
    }

    #[test]
    fn hex7_is_lattice_periodic(x in -5.0f64..5.0, y in -5.0f64..5.0, i in -3i64..3, j in -3i64..3) {
        let side = hex7_side();
        let a = hex_center(side, SAME_COLOR_TRANSLATIONS[0]);
        let b = hex_center(side, SAME_COLOR_TRANSLATIONS[1]);
        let t = [i as f64 * a[0] + j as f64 * b[0], i as f64 * a[1] + j as f64 * b[1]];
        // Keep clear of cell boundaries, where rounding in the translation decides ownership.
        let c = hex7_color([x, y]);
        let moved = hex7_color([x + t[0], y + t[1]]);
        let nudged: Vec<usize> = [[1e-7, 0.0], [-1e-7, 0.0], [0.0, 1e-7], [0.0, -1e-7]]
            .iter()
            .map(|e| hex7_color([x + e[0], y + e[1]]))
            .collect();
        prop_assume!(nudged.iter().all(|&n| n == c));
        prop_assert_eq!(c, moved);
    }
}
