use std::sync::Arc;

use ppd::benchmarks::{
    bump_gd_objective, bump_minimizer_distance, bump_minimizers, bump_prox_objective,
    composite_minimum, composite_saddle_value, composite_saddles, Huber, Octopus, OctopusParams,
};
use ppd::optimizers::{run_first_order, seeded_rng, Method};
use ppd::{CompositeObjective, Point};

/// Golden-section minimizer of a unimodal function on `[a, b]`.
fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

#[test]
fn canonical_gluing_balance() {
    let e = std::f64::consts::E;
    let oct = Octopus::new(OctopusParams::canonical(2)).unwrap();
    assert!((oct.nu() - (37.0 * e + 13.0) * e * e / 6.0).abs() < 1e-12);
    assert!((oct.nu() - 139.870).abs() < 1e-3);
}

#[test]
fn composite_minimum_matches_a_line_search() {
    for d in [2, 3, 6] {
        let p = OctopusParams::canonical(d);
        let oct = Octopus::new(p).unwrap();
        for lambda in [0.0, 0.01, 0.3] {
            let obj = CompositeObjective::new(Arc::new(oct.clone()), lambda).unwrap();
            // along the diagonal every leg coordinate is the same
            let phi = |s: f64| obj.eval_phi(&Point::from_fn(d, |_| s)).unwrap();
            let t = p.tau;
            let s = golden(phi, 3.0 * t, 5.0 * t);
            let (m, v) = composite_minimum(&p, lambda);
            assert!((m[0] - s).abs() < 1e-6, "d={d} lambda={lambda}: {} vs {s}", m[0]);
            assert!((v - obj.eval_phi(&m).unwrap()).abs() < 1e-9 * v.abs());
        }
    }
}

#[test]
fn composite_saddle_values() {
    let p = OctopusParams::canonical(4);
    let obj = CompositeObjective::new(Arc::new(Octopus::new(p).unwrap()), 0.05).unwrap();
    for (k, s) in composite_saddles(&p, 0.05).iter().enumerate() {
        let v = obj.eval_phi(s).unwrap();
        assert!((v - composite_saddle_value(&p, 0.05, k)).abs() < 1e-9 * v.abs().max(1.0));
    }
}

#[test]
fn bump_minimizers_match_descent() {
    // long, small-step proximal descent from either side of the saddle
    let obj = bump_prox_objective();
    for (y0, m) in [(0.5, 0usize), (-0.5, 1)] {
        let x0 = Point::new(vec![0.2, y0]).unwrap();
        let r = run_first_order(&obj, &x0, Method::Pd, 0.2, 20_000, None, &mut seeded_rng(0)).unwrap();
        let target = &bump_minimizers()[m];
        assert!(r.final_point.distance(target) < 2e-3, "{:?} vs {target:?}", r.final_point);
    }
    let [a, b] = bump_minimizers();
    assert!(a[1] > 2.0 && b[1] < -2.0);
    assert!((a[1] + b[1]).abs() < 2e-3 && a[0].abs() < 2e-3);
    assert_eq!(bump_minimizer_distance(&a), 0.0);
}

#[test]
fn bump_objectives_agree_in_value() {
    let gd = bump_gd_objective();
    let pd = bump_prox_objective();
    for x in [[0.3, 0.01], [-1.0, 2.0], [4.0, -3.5]] {
        let x = Point::new(x.to_vec()).unwrap();
        assert!((gd.eval_phi(&x).unwrap() - pd.eval_phi(&x).unwrap()).abs() < 1e-14);
    }
    let h = pd.smooth().hessian(&Point::zeros(2)).unwrap().unwrap();
    assert!((h[(0, 0)] - 1.0).abs() < 1e-15 && (h[(1, 1)] + 1.0).abs() < 1e-15);
}

#[test]
fn huber_variants() {
    let x = Point::new(vec![3.0, -4.0]).unwrap();
    let norm = Huber::new(1.0);
    let coord = Huber::coordinatewise(1.0);
    assert_eq!(norm.value(&x), 4.5);
    assert_eq!(coord.value(&x), 2.5 + 3.5);
    let g = norm.gradient(&x);
    assert!((g[0] - 0.6).abs() < 1e-15 && (g[1] + 0.8).abs() < 1e-15);
    assert_eq!(coord.gradient(&x).as_slice(), &[1.0, -1.0]);
    let small = Point::new(vec![0.3, -0.4]).unwrap();
    assert!((norm.value(&small) - 0.125).abs() < 1e-15);
    // prox of the coordinatewise variant is a per-coordinate Huber prox
    let p = coord.prox(&Point::new(vec![5.0, 0.5]).unwrap(), 2.0);
    assert!((p[0] - 3.0).abs() < 1e-15 && (p[1] - 0.5 / 3.0).abs() < 1e-15);
}
