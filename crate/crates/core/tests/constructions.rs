use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udcert::chromatic::{clique_lower_bound, is_k_colorable, SolveBudget};
use udcert::constructions::curve::{curve_odd_cycle, four_step_path, gamma};
use udcert::constructions::forbidden::{circle_odd_cycle, enumerate_forbidden_radii, forbidden_radius};
use udcert::constructions::pentagon::{
    pentagon_config, radius_map, radius_map_jacobian, PentagonConfig, PentagonParams,
};
use udcert::constructions::rational::{rational_odd_cycle, RationalCycleParams};
use udcert::constructions::slab::{slab_chi5_witness, SpindleParams};
use udcert::constructions::strip::{min_admissible_gadgets, strip_chi3_witness, strip_chi4_witness};
use udcert::geometry::{circumcenter, unit_equidistant_circle};
use udcert::scalar::Scalar;
use udcert::udgraph::validate_geometry;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn chi_is(g: &udcert::udgraph::UnitDistanceGraph, k: usize) {
    let b = SolveBudget::seconds(120.0);
    assert!(is_k_colorable(g, k - 1, &b).is_unsat(), "k = {}", k - 1);
    assert!(is_k_colorable(g, k, &b).is_sat(), "k = {k}");
}

#[test]
fn forbidden_radius_examples() {
    assert!((forbidden_radius(1, 3).unwrap().radius - 0.577350).abs() < 1e-6);
    assert!((forbidden_radius(1, 7).unwrap().radius - 1.152382).abs() < 1e-6);
    assert!(forbidden_radius(2, 3).is_err());
    assert!(forbidden_radius(1, 4).is_err());
    assert!(enumerate_forbidden_radii(0.50001, 0.51, 5).unwrap().is_empty());
    assert!(enumerate_forbidden_radii(0.5, 0.51, 5).is_err());
    let found = enumerate_forbidden_radii(0.94, 0.97, 23).unwrap();
    assert!((found[0].radius - 0.949790).abs() < 1e-6 && (found[0].l, found[0].m) == (3, 17));
    assert!((found[1].radius - 0.962309).abs() < 1e-6 && (found[1].l, found[1].m) == (4, 23));
}

#[test]
fn pentagon_cycle_on_its_circle() {
    let fr = forbidden_radius(1, 5).unwrap();
    assert!((fr.radius - 0.850651).abs() < 1e-6);
    let d = 2.0 * (1.0 - fr.radius * fr.radius).sqrt();
    let c = unit_equidistant_circle(&[vec![0.0, 0.0, 0.0], vec![d, 0.0, 0.0]]).unwrap();
    let cycle = circle_odd_cycle(&c, &fr, 1e-12, 0.0).unwrap();
    assert_eq!(cycle.points.len(), 5);
    assert!(cycle.max_chord_error() < 1e-12);
    let wrong = forbidden_radius(1, 7).unwrap();
    assert!(circle_odd_cycle(&c, &wrong, 1e-9, 0.0).is_err());
}

#[test]
fn strip_chi3_on_a_parameter_grid() {
    for (eps, steps) in [(0.3, 12), (0.3, 15), (0.35, 9), (0.4, 7), (0.5, 5)] {
        let g = strip_chi3_witness(eps, steps).unwrap();
        assert!(validate_geometry(&g).pass, "eps {eps} steps {steps}");
        chi_is(&g, 3);
    }
    assert!(strip_chi3_witness(0.3, 2).is_err());
}

#[test]
fn strip_chi4_for_three_heights() {
    for h in [0.88, 0.90, 0.92] {
        let m = min_admissible_gadgets(h).unwrap();
        let g = strip_chi4_witness(h, m).unwrap();
        assert!(validate_geometry(&g).pass, "h = {h}");
        chi_is(&g, 4);
    }
    assert!(strip_chi4_witness(0.8, 20).is_err());
    assert!(strip_chi4_witness(1.2, 20).is_err());
}

#[test]
fn slab_witness_shape() {
    let p = SpindleParams::reference();
    let g = slab_chi5_witness(&p).unwrap();
    assert_eq!(clique_lower_bound(&g), 3);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in p.circles().unwrap() {
        let (a, b) = c.coordinate_range(2);
        lo = lo.min(a);
        hi = hi.max(b);
    }
    assert!(lo > 0.05 && hi < 0.65 - 0.05, "z range [{lo}, {hi}]");
    chi_is(&g, 5);
}

#[test]
fn rational_cycle_identities() {
    for l in 1..=10u64 {
        let p = RationalCycleParams::new(l).unwrap();
        assert_eq!(3 * p.b * p.b, 2 * p.n - 1);
        // (2l+1)/n < sqrt(2/n)  <=>  b^2 < 2n.
        assert!(p.b * p.b < 2 * p.n);
    }
    let p = RationalCycleParams::new(2).unwrap();
    assert_eq!(p.n, 38);
    let e: Vec<String> = p.step(1).iter().map(|q| q.to_string()).collect();
    assert_eq!(e, ["37/38", "5/38", "5/38", "5/38"]);
    let g = rational_odd_cycle(2, &Scalar::ratio(1, 4)).unwrap();
    assert_eq!(g.edge_count(), 75);
    assert!(rational_odd_cycle(1, &Scalar::ratio(1, 10)).is_err());
}

#[test]
fn four_step_examples() {
    let u = [0.4, -1.0];
    let path = four_step_path(u, u, 0.2).unwrap();
    assert!(dist(&path.points[2], &u) < 1e-12 && dist(&path.points[4], &u) < 1e-12);
    assert!((gamma(0.2) - 0.004989).abs() < 1e-6);
    let path = four_step_path([0.0, 0.0], [0.003, 0.0], 0.2).unwrap();
    assert!(path.max_step_error() < 1e-12);
    assert!(four_step_path([0.0, 0.0], [0.006, 0.0], 0.2).is_err());
}

#[test]
fn curve_cycles() {
    let arc: Vec<[f64; 2]> = (0..=300)
        .map(|i| {
            let t = std::f64::consts::PI * i as f64 / 300.0;
            [1.1 - 1.1 * t.cos(), 1.1 * t.sin()]
        })
        .collect();
    let c = curve_odd_cycle(&arc, 0.3).unwrap();
    assert!(validate_geometry(&c.graph).pass);
    assert_eq!(c.graph.edge_count(), 4 * c.segments + 1);
    assert!(c.max_offset < 0.3);
    assert!(curve_odd_cycle(&[[0.0, 0.0], [1.5, 0.0]], 0.2).is_err());
}

#[test]
fn pentagon_examples() {
    let c = pentagon_config(0.3, 0.1).unwrap();
    for v in &c.pentagon {
        assert!((dist(v, &[0.15, 0.15]) - 0.1).abs() < 1e-12);
    }
    assert!(pentagon_config(0.3, 0.2).is_err());
    let c = PentagonConfig::new(PentagonParams::reference()).unwrap();
    let r = radius_map(&c, &c.u1).unwrap();
    for i in 0..3 {
        let (a, b) = c.pair(i);
        let (_, big_r) = circumcenter(&[c.u1.clone(), a.to_vec(), b.to_vec()]).unwrap();
        assert!((r[i] - (1.0 - big_r * big_r).sqrt()).abs() < 1e-12);
    }
    assert!(radius_map(&c, &c.points[0]).is_err());
}

#[test]
fn jacobian_matches_finite_differences() {
    let c = PentagonConfig::new(PentagonParams::reference()).unwrap();
    let ball = c.params.ball_radius;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-7;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let s: [f64; 3] = std::array::from_fn(|_| rng.random_range(-ball..ball) / 2.0);
        let jac = radius_map_jacobian(&c, &c.point(&s)).unwrap();
        for j in 0..3 {
            let mut plus = s;
            let mut minus = s;
            plus[j] += h;
            minus[j] -= h;
            let rp = radius_map(&c, &c.point(&plus)).unwrap();
            let rm = radius_map(&c, &c.point(&minus)).unwrap();
            for i in 0..3 {
                let fd = (rp[i] - rm[i]) / (2.0 * h);
                let a = jac.matrix[i][j];
                worst = worst.max((fd - a).abs() / a.abs().max(1e-3));
            }
        }
    }
    assert!(worst < 1e-6, "{worst:e}");
}

proptest! {
    #[test]
    fn four_step_paths_stay_close(rho in 0.0f64..1.0, phi in 0.0f64..std::f64::consts::TAU, eps in 0.05f64..0.9) {
        let g = gamma(eps);
        let u = [1.0, 2.0];
        let t = [u[0] + rho * g * phi.cos(), u[1] + rho * g * phi.sin()];
        let p = four_step_path(u, t, eps).unwrap();
        prop_assert!(p.max_step_error() < 1e-12);
        prop_assert!(dist(&p.points[4], &t) < 1e-12);
        let bound = 2.0 * (eps / 4.0).sin() + 1e-12;
        prop_assert!(dist(&p.points[0], &p.points[2]) <= bound);
        prop_assert!(dist(&p.points[2], &p.points[4]) <= bound);
    }

    #[test]
    fn odd_cycles_close(m in (1u64..50).prop_map(|k| 2 * k + 1), frac in 0.0f64..1.0, theta in 0.0f64..6.3) {
        let l = 1 + ((m / 2 - 1) as f64 * frac) as u64;
        prop_assume!(num_integer::gcd(l, m) == 1);
        let fr = forbidden_radius(l, m).unwrap();
        let circle = udcert::geometry::Circle {
            center: vec![0.0, 0.0, 0.2],
            radius: fr.radius,
            basis: [vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
        };
        let cycle = circle_odd_cycle(&circle, &fr, 1e-12, theta).unwrap();
        prop_assert_eq!(cycle.points.len() as u64, m);
        prop_assert!(cycle.max_chord_error() < 1e-9);
    }
}
