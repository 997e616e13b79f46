//! Property checks shared by the property-test target and the acceptance
//! runner. Each check drives its own proptest runner and reports the first
//! minimal counterexample as an error string.

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use ppd::analysis::{fd_gradient_richardson, min_eigenvalue};
use ppd::benchmarks::{
    composite_saddles, gluing_balance, gluing_balance_from_g1, huber_gradient, GaussianBump,
    Octopus, OctopusParams, Quadratic, Zero,
};
use ppd::optimizers::{
    make_ppd_params, run_first_order, run_ppd, seeded_rng, Method, Perturbation, Termination,
};
use ppd::prox::{gradient_mapping, prox_displacement, prox_step, soft_threshold};
use ppd::{CompositeObjective, Point, SmoothObjective};

pub type Check = fn() -> Result<(), String>;

/// Every suite of the property acceptance criterion.
pub const SUITES: &[(&str, Check)] = &[
    ("soft-threshold grid oracle", soft_threshold_matches_grid_oracle),
    ("prox nonexpansive on 1000 pairs", prox_is_nonexpansive),
    ("prox displacement bound", prox_displacement_is_bounded),
    ("attracting region zeroing", attracting_region_maps_to_origin),
    ("octopus seam continuity", octopus_seams_are_continuous),
    ("octopus even symmetry", octopus_is_even),
    ("gradient vs finite differences", gradients_match_finite_differences),
    ("saddle catalog", saddle_catalog_is_exact),
    ("sufficient decrease", proximal_descent_decreases_sufficiently),
    ("run determinism", runs_are_deterministic),
];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn fail(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn point(v: Vec<f64>) -> Point {
    Point::new(v).expect("finite coordinates")
}

fn coords(dim: std::ops::RangeInclusive<usize>, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, dim)
}

/// Random octopus parameters with `gamma <= L`.
pub fn octopus_params(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = OctopusParams> {
    (0.5f64..4.0, 0.05f64..1.0, 0.5f64..3.0, dims).prop_map(|(l, frac, tau, d)| {
        OctopusParams::new(l, frac * l, tau, d).expect("valid octopus parameters")
    })
}

/// Minimizer of `theta |x| + (x - y)^2 / 2` by grid search and golden-section
/// refinement, without using the closed form.
pub fn scalar_prox_oracle(y: f64, theta: f64) -> f64 {
    let h = |x: f64| theta * x.abs() + 0.5 * (x - y) * (x - y);
    let (lo, hi) = (y - theta - 1.0, y + theta + 1.0);
    let n = 4000;
    let step = (hi - lo) / n as f64;
    let mut best = lo;
    for i in 0..=n {
        let x = lo + step * i as f64;
        if h(x) < h(best) {
            best = x;
        }
    }
    if h(0.0) <= h(best) {
        best = 0.0;
    }
    let (mut a, mut b) = (best - step, best + step);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if h(c) < h(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let m = 0.5 * (a + b);
    if h(0.0) <= h(m) {
        0.0
    } else {
        m
    }
}

pub fn soft_threshold_matches_grid_oracle() -> Result<(), String> {
    runner(256)
        .run(&(coords(1..=8, -10.0, 10.0), 0.0f64..5.0), |(y, theta)| {
            let out = soft_threshold(&point(y.clone()), theta).map_err(fail)?;
            for (i, yi) in y.iter().enumerate() {
                let o = scalar_prox_oracle(*yi, theta);
                prop_assert!(
                    (out[i] - o).abs() <= 1e-6,
                    "y={yi} theta={theta}: {} vs oracle {o}",
                    out[i]
                );
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn prox_is_nonexpansive() -> Result<(), String> {
    let pair = (1usize..=10).prop_flat_map(|d| {
        (
            prop::collection::vec(-10.0f64..10.0, d),
            prop::collection::vec(-10.0f64..10.0, d),
            0.0f64..5.0,
        )
    });
    runner(1000)
        .run(&pair, |(a, b, theta)| {
            let (a, b) = (point(a), point(b));
            let pa = soft_threshold(&a, theta).map_err(fail)?;
            let pb = soft_threshold(&b, theta).map_err(fail)?;
            prop_assert!(pa.distance(&pb) <= a.distance(&b) * (1.0 + 1e-12) + 1e-15);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn prox_displacement_is_bounded() -> Result<(), String> {
    runner(512)
        .run(&(coords(1..=20, -10.0, 10.0), 0.0f64..5.0), |(y, theta)| {
            let y = point(y);
            let disp = prox_displacement(&y, theta).map_err(fail)?;
            let bound = theta * (y.dim() as f64).sqrt();
            prop_assert!(disp.norm() <= bound * (1.0 + 1e-12), "{} > {bound}", disp.norm());
            let st = soft_threshold(&y, theta).map_err(fail)?;
            prop_assert!(st.distance(&y.add(&disp)) <= 1e-12 * (1.0 + y.norm()));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Points with `||x - eta grad f(x)||_inf <= eta lambda` for a diagonal
/// quadratic, built by inverting `y = (1 - eta a) x`.
pub fn attracting_region_maps_to_origin() -> Result<(), String> {
    let case = (1usize..=8).prop_flat_map(|d| {
        (
            prop::collection::vec(-3.0f64..3.0, d),
            prop::collection::vec(-1.0f64..1.0, d),
            0.01f64..0.2,
            0.01f64..2.0,
        )
    });
    runner(512)
        .run(&case, |(a, u, eta, lambda)| {
            let q = Quadratic::diagonal(a.clone());
            let ell = q.grad_lipschitz();
            let eta = eta / ell;
            let x = point(
                a.iter()
                    .zip(&u)
                    .map(|(ai, ui)| ui * eta * lambda / (1.0 - eta * ai))
                    .collect(),
            );
            let obj = CompositeObjective::new(Arc::new(q), lambda).map_err(fail)?;
            let step = prox_step(&obj, &x, eta).map_err(fail)?;
            prop_assert!(step.pre_prox.norm_inf() <= eta * lambda * (1.0 + 1e-12));
            for v in step.next.iter() {
                prop_assert!(*v == 0.0 && v.is_sign_positive(), "coordinate {v}");
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// A first-quadrant point whose coordinate `k` sits on `seam`; the legs before
/// `k` are in `[2 tau, 6 tau]` and the tail in `[0, tau]`.
fn seam_point(p: &OctopusParams, k: usize, seam: f64, u: &[f64]) -> Vec<f64> {
    let t = p.tau;
    (0..p.dim)
        .map(|j| {
            if j < k {
                2.0 * t + 4.0 * t * u[j]
            } else if j == k {
                seam
            } else {
                t * u[j]
            }
        })
        .collect()
}

pub fn octopus_seams_are_continuous() -> Result<(), String> {
    let case = octopus_params(2..=6).prop_flat_map(|p| {
        (
            Just(p),
            0..p.dim,
            prop::collection::vec(0.0f64..1.0, p.dim),
            any::<bool>(),
        )
    });
    runner(256)
        .run(&case, |(p, k, u, second)| {
            let nu = gluing_balance(&p);
            prop_assert!((nu - gluing_balance_from_g1(&p)).abs() <= 1e-9 * nu.abs().max(1.0));
            let oct = Octopus::new(p).map_err(fail)?;
            let t = p.tau;
            let seam = if second { 2.0 * t } else { t };
            let on = seam_point(&p, k, seam, &u);
            let h = 1e-12 * t;
            for side in [-h, h] {
                let mut off = on.clone();
                off[k] += side;
                let (x, y) = (point(on.clone()), point(off));
                let (fx, fy) = (oct.value(&x).map_err(fail)?, oct.value(&y).map_err(fail)?);
                prop_assert!(
                    (fx - fy).abs() <= 1e-9 * fx.abs().max(1.0),
                    "value jump {} at seam {seam} coordinate {k}",
                    fx - fy
                );
                let (gx, gy) = (oct.gradient(&x).map_err(fail)?, oct.gradient(&y).map_err(fail)?);
                prop_assert!(
                    gx.distance(&gy) <= 1e-9 * gx.norm().max(1.0),
                    "gradient jump {} at seam {seam} coordinate {k}",
                    gx.distance(&gy)
                );
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn octopus_is_even() -> Result<(), String> {
    let case = octopus_params(2..=8).prop_flat_map(|p| {
        (
            Just(p),
            any::<u64>(),
            prop::collection::vec(any::<bool>(), p.dim),
        )
    });
    runner(256)
        .run(&case, |(p, seed, flips)| {
            let oct = Octopus::new(p).map_err(fail)?;
            let x = oct.sample_domain(&mut seeded_rng(seed));
            let s: Vec<f64> = flips.iter().map(|f| if *f { -1.0 } else { 1.0 }).collect();
            let y = point(x.iter().zip(&s).map(|(v, si)| v * si).collect());
            prop_assert_eq!(oct.value(&x).map_err(fail)?, oct.value(&y).map_err(fail)?);
            let (gx, gy) = (oct.gradient(&x).map_err(fail)?, oct.gradient(&y).map_err(fail)?);
            for j in 0..p.dim {
                prop_assert_eq!(gy[j], s[j] * gx[j]);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn fd_agrees(f: &dyn SmoothObjective, x: &Point) -> Result<(), TestCaseError> {
    let fd = match fd_gradient_richardson(|p| f.value(p), x, 1e-4) {
        Ok(g) => g,
        // the stencil left the domain
        Err(ppd::Error::Domain { .. }) => return Err(TestCaseError::reject("stencil off domain")),
        Err(e) => return Err(fail(e)),
    };
    let g = f.gradient(x).map_err(fail)?;
    let err = g.distance(&fd);
    prop_assert!(
        err <= 1e-5 * g.norm().max(1.0),
        "{}: |grad - fd| = {err:e} at {x:?}",
        f.name()
    );
    Ok(())
}

pub fn gradients_match_finite_differences() -> Result<(), String> {
    let mut r = runner(256);
    r.run(&(octopus_params(2..=6), any::<u64>()), |(p, seed)| {
        let oct = Octopus::new(p).map_err(fail)?;
        let x = oct.sample_domain(&mut seeded_rng(seed));
        fd_agrees(&oct, &x)
    })
    .map_err(|e| format!("octopus: {e}"))?;
    r.run(&coords(2..=2, -6.0, 6.0), |x| {
        let x = point(x);
        fd_agrees(&GaussianBump::smooth_part(), &x)?;
        fd_agrees(&GaussianBump::with_huber(), &x)
    })
    .map_err(|e| format!("bump: {e}"))?;
    r.run(&(coords(1..=6, -3.0, 3.0), coords(6..=6, -5.0, 5.0)), |(x, a)| {
        let x = point(x);
        let q = Quadratic::diagonal(a[..x.dim()].to_vec());
        fd_agrees(&q, &x)?;
        fd_agrees(&Zero::new(x.dim()), &x)
    })
    .map_err(|e| format!("quadratic: {e}"))?;
    r.run(&(coords(1..=4, -3.0, 3.0), 0.1f64..2.0), |(x, mu)| {
        let x = point(x);
        // the norm-based Huber gradient on both sides of its seam at ||x|| = mu
        prop_assume!((x.norm() - mu).abs() > 1e-2);
        let h = |p: &Point| Ok(ppd::benchmarks::huber_value(mu, p));
        let fd = fd_gradient_richardson(h, &x, 1e-3).map_err(fail)?;
        let g = huber_gradient(mu, &x);
        prop_assert!(g.distance(&fd) <= 1e-5 * g.norm().max(1.0));
        Ok(())
    })
    .map_err(|e| format!("huber: {e}"))
}

pub fn saddle_catalog_is_exact() -> Result<(), String> {
    runner(128)
        .run(&(octopus_params(2..=8), 0.0f64..0.05), |(p, lambda)| {
            let oct = Octopus::new(p).map_err(fail)?;
            let cat = oct.catalog();
            for s in &cat.saddles {
                let g = oct.gradient(s).map_err(fail)?;
                prop_assert!(g.norm() <= 1e-10, "gradient {} at {s:?}", g.norm());
                let h = oct.hessian(s).map_err(fail)?.expect("analytic Hessian");
                let m = min_eigenvalue(&h).map_err(fail)?;
                prop_assert!((m + 2.0 * p.gamma).abs() <= 1e-10 * p.gamma.max(1.0), "min eig {m}");
            }
            let g = oct.gradient(&cat.global_min).map_err(fail)?;
            prop_assert!(g.norm() <= 1e-10);
            let obj = CompositeObjective::new(Arc::new(oct.clone()), lambda).map_err(fail)?;
            let eta = 0.5 / oct.grad_lipschitz();
            for s in composite_saddles(&p, lambda) {
                let gm = gradient_mapping(&obj, &s, eta).map_err(fail)?;
                prop_assert!(gm.norm() <= 1e-10, "composite gradient mapping {}", gm.norm());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `phi_t - phi_{t+1} >= (1/eta - ell/2) ||x_t - x_{t+1}||^2` along plain
/// proximal descent with `eta <= 1/ell`.
pub fn proximal_descent_decreases_sufficiently() -> Result<(), String> {
    let case = (octopus_params(2..=6), any::<u64>(), 0.05f64..=1.0, 0.0f64..0.5);
    runner(128)
        .run(&case, |(p, seed, frac, lambda)| {
            let oct = Octopus::new(p).map_err(fail)?;
            let ell = oct.grad_lipschitz();
            let x0 = oct.sample_domain(&mut seeded_rng(seed));
            let obj = CompositeObjective::new(Arc::new(oct), lambda).map_err(fail)?;
            let eta = frac / ell;
            let mut rng = seeded_rng(seed);
            let rep = run_first_order(&obj, &x0, Method::Pd, eta, 200, None, &mut rng)
                .map_err(fail)?;
            // descent may leave the tubes of the domain; the steps taken so far still count
            prop_assert!(rep.termination != Termination::AbortedNonfinite, "{:?}", rep.abort);
            for w in rep.trace.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                let need = (1.0 / eta - ell / 2.0) * a.gm_norm * a.gm_norm;
                let tol = 1e-9 * a.phi.abs().max(1.0);
                prop_assert!(
                    a.phi - b.phi >= need - tol,
                    "step {}: decrease {} < {need}",
                    a.iter,
                    a.phi - b.phi
                );
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn runs_are_deterministic() -> Result<(), String> {
    let case = (2usize..=5, any::<u64>());
    runner(24)
        .run(&case, |(d, seed)| {
            let oct = Octopus::new(OctopusParams::canonical(d)).map_err(fail)?;
            let x0 = Point::from_fn(d, |j| if j == 0 { 0.27 } else { 0.0 });
            let ell = oct.grad_lipschitz();
            let rho = oct.hessian_lipschitz();
            let obj = CompositeObjective::new(Arc::new(oct), 0.01).map_err(fail)?;
            let params = make_ppd_params(ell, rho, 0.01, 3.0, 0.1, 100.0, d)
                .and_then(|p| p.with_radius(0.1))
                .map_err(fail)?;
            let a = run_ppd(&obj, &x0, &params, 600, &mut seeded_rng(seed)).map_err(fail)?;
            let b = run_ppd(&obj, &x0, &params, 600, &mut seeded_rng(seed)).map_err(fail)?;
            prop_assert_eq!(&a, &b);
            let pert = Perturbation {
                radius: params.r,
                threshold: params.g_thres,
                cooldown: params.t_thres,
            };
            let run_pgd = |s| {
                run_first_order(&obj, &x0, Method::Pgd, params.eta, 600, Some(pert), &mut seeded_rng(s))
            };
            prop_assert_eq!(run_pgd(seed).map_err(fail)?, run_pgd(seed).map_err(fail)?);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
