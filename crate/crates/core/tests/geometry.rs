use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udcert::geometry::{
    circle_point, circumcenter, distance, distance_squared, slab_contains, unit_equidistant_circle, Point, SlabSpec,
};
use udcert::scalar::Scalar;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn random_centers(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    loop {
        let base: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let centers: Vec<Vec<f64>> = (0..d - 1)
            .map(|_| base.iter().map(|b| b + rng.random_range(-0.7..0.7)).collect())
            .collect();
        if let Ok((_, r)) = circumcenter(&centers) {
            if r < 0.98 && (d == 3 || r > 1e-3) {
                return centers;
            }
        }
    }
}

#[test]
fn equidistant_circles_hit_every_center() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for set in 0..1000 {
        let d = if set % 2 == 0 { 3 } else { 4 };
        let centers = random_centers(&mut rng, d);
        let c = unit_equidistant_circle(&centers).unwrap();
        for _ in 0..100 {
            let p = circle_point(&c, rng.random_range(0.0..std::f64::consts::TAU));
            for q in &centers {
                worst = worst.max((dist(&p, q) - 1.0).abs());
            }
        }
    }
    assert!(worst < 1e-9, "{worst:e}");
}

#[test]
fn distance_examples() {
    let p = Point::ratios(&[(0, 1), (0, 1), (0, 1), (0, 1)]);
    let q = Point::ratios(&[(13, 14), (3, 14), (3, 14), (3, 14)]);
    let d = distance(&p, &q).unwrap();
    assert!(d.is_exact());
    assert_eq!(d.to_f64(), 1.0);
    let d = distance(&Point::real(&[0.0, 0.0]), &Point::real(&[3.0, 4.0])).unwrap();
    assert_eq!(d.to_f64(), 5.0);
    assert!(distance(&Point::real(&[0.0, 0.0]), &Point::real(&[0.0, 0.0, 0.0])).is_err());
}

#[test]
fn equidistant_circle_examples() {
    let c = unit_equidistant_circle(&[vec![0.0, 0.0, 0.0], vec![0.625192, 0.0, 0.0]]).unwrap();
    assert!((c.radius - 0.949886).abs() < 1e-6);
    let s = 3f64.sqrt() / 2.0;
    let c = unit_equidistant_circle(&[vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0], vec![0.5, s, 0.0, 0.0]]).unwrap();
    assert!((c.radius - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
    assert!(unit_equidistant_circle(&[vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]]).is_err());
}

proptest! {
    #[test]
    fn exact_squared_distance_is_sum_of_squares(coords in prop::collection::vec((-1000i64..1000, 1i64..200), 2..=4)) {
        let origin = Point::ratios(&vec![(0, 1); coords.len()]);
        let p = Point::ratios(&coords);
        let expect = coords.iter().fold(BigRational::zero(), |acc, &(n, d)| {
            let q = BigRational::new(BigInt::from(n), BigInt::from(d));
            acc + &q * &q
        });
        match distance_squared(&origin, &p).unwrap() {
            Scalar::Exact(q) => prop_assert_eq!(q, expect),
            Scalar::Real(_) => prop_assert!(false, "exact inputs gave a real distance"),
        }
    }

    #[test]
    fn circumcenter_is_equidistant(pts in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 2), 3)) {
        let a = &pts[0];
        let b = &pts[1];
        let c = &pts[2];
        let area = ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs();
        prop_assume!(area > 1e-2);
        let (center, r) = circumcenter(&pts).unwrap();
        let worst = pts.iter().map(|p| (dist(&center, p) - r).abs()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-12 * r.max(1.0), "residual {worst:e} for radius {r}");
    }

    #[test]
    fn slab_membership_is_monotone(z in -0.5f64..1.5, e1 in 0.01f64..1.0, extra in 0.0f64..1.0) {
        let p = Point::real(&[0.3, -2.0, z]);
        let s1 = SlabSpec::new(2, 1, Scalar::Real(e1)).unwrap();
        let s2 = SlabSpec::new(2, 1, Scalar::Real(e1 + extra)).unwrap();
        if slab_contains(&s1, &p).unwrap() {
            prop_assert!(slab_contains(&s2, &p).unwrap());
        }
    }
}
