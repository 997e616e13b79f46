//! Experiment presets shared by the command-line tool, the examples and the
//! acceptance tests.

use std::sync::Arc;

use crate::benchmarks::{
    bump_gd_objective, bump_minimizer_distance, bump_prox_objective, composite_minimum,
    Octopus, OctopusParams,
};
use crate::error::Result;
use crate::objective::{CompositeObjective, Point, SmoothObjective};
use crate::optimizers::{
    make_ppd_params, run_first_order_with, run_ppd_traced, seeded_rng, sample_ball,
    FirstOrderConfig, Method, Perturbation, PpdParams, RunReport, StorePoints,
};

/// l1 weight of the octopus comparison.
pub const COMPARE_LAMBDA: f64 = 0.01;
/// Perturbation norm of the octopus comparison.
pub const COMPARE_RADIUS: f64 = 0.1;
pub const COMPARE_C: f64 = 3.0;
pub const COMPARE_MAX_ITER: usize = 1000;
pub const DEFAULT_EPS: f64 = 0.01;
pub const DEFAULT_DELTA: f64 = 0.1;
pub const SWEEP_MAX_ITER: usize = 1000;
/// Distance to a bump minimizer that counts as success.
pub const SWEEP_SUCCESS_RADIUS: f64 = 0.2;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `seed` xor a stable hash of the cell coordinates.
pub fn cell_seed(seed: u64, coords: &[u64]) -> u64 {
    let h = coords
        .iter()
        .fold(0x5eed_u64, |acc, c| splitmix64(acc ^ splitmix64(*c)));
    seed ^ h
}

/// One octopus instance with its composite objective and reference values.
#[derive(Clone, Debug)]
pub struct OctopusExperiment {
    pub octopus: Arc<Octopus>,
    pub obj: CompositeObjective,
    pub lambda: f64,
    pub x0: Point,
    /// Composite minimum value of `f + lambda ||x||_1`.
    pub min_value: f64,
    pub min_point: Point,
}

impl OctopusExperiment {
    /// Canonical octopus in dimension `dim`, started on the first leg next to
    /// the origin saddle at `(tau / 10, 0, ..., 0)`.
    pub fn canonical(dim: usize, lambda: f64) -> Result<Self> {
        Self::new(OctopusParams::canonical(dim), lambda)
    }

    pub fn new(params: OctopusParams, lambda: f64) -> Result<Self> {
        let octopus = Arc::new(Octopus::new(params)?);
        let obj = CompositeObjective::new(octopus.clone(), lambda)?;
        let t = params.tau;
        let x0 = Point::from_fn(params.dim, |j| if j == 0 { t / 10.0 } else { 0.0 });
        let (min_point, min_value) = composite_minimum(&params, lambda);
        Ok(OctopusExperiment {
            octopus,
            obj,
            lambda,
            x0,
            min_value,
            min_point,
        })
    }

    pub fn dim(&self) -> usize {
        self.octopus.params().dim
    }

    pub fn with_start(mut self, x0: Point) -> Self {
        self.x0 = x0;
        self
    }

    pub fn ell(&self) -> f64 {
        self.octopus.grad_lipschitz()
    }

    pub fn rho(&self) -> f64 {
        self.octopus.hessian_lipschitz()
    }

    /// `phi(x0)` minus the smooth minimum `-d nu`.
    pub fn delta_phi(&self) -> Result<f64> {
        let d = self.dim() as f64;
        Ok(self.obj.eval_phi(&self.x0)? + d * self.octopus.nu())
    }

    /// Algorithm parameters from the declared constants; `radius` replaces the
    /// derived perturbation radius when given.
    pub fn ppd_params(&self, eps: f64, c: f64, delta: f64, radius: Option<f64>) -> Result<PpdParams> {
        let p = make_ppd_params(
            self.ell(),
            self.rho(),
            eps,
            c,
            delta,
            self.delta_phi()?,
            self.dim(),
        )?;
        match radius {
            Some(r) => {
                log::info!("perturbation radius {r} (derived value {})", p.r);
                p.with_radius(r)
            }
            None => Ok(p),
        }
    }

    /// The comparison settings: `c = 3`, perturbation norm `0.1`, `eps = 0.01`,
    /// `delta = 0.1`.
    pub fn compare_params(&self) -> Result<PpdParams> {
        self.ppd_params(DEFAULT_EPS, COMPARE_C, DEFAULT_DELTA, Some(COMPARE_RADIUS))
    }

    /// Gap between `phi` and the composite minimum, relative to `d nu`.
    pub fn relative_gap(&self, phi: f64) -> f64 {
        (phi - self.min_value).abs() / (self.dim() as f64 * self.octopus.nu())
    }
}

/// Run `method` with the stepsize and perturbation schedule of `params`.
///
/// PGD perturbs with radius `params.r` when its step length drops below
/// `g_thres`, at most once every `t_thres` iterations.
pub fn run_with_params(
    obj: &CompositeObjective,
    x0: &Point,
    method: Method,
    params: &PpdParams,
    max_iter: usize,
    seed: u64,
    store: StorePoints,
) -> Result<RunReport> {
    let mut rng = seeded_rng(seed);
    match method {
        Method::Ppd => run_ppd_traced(obj, x0, params, max_iter, &mut rng, store),
        _ => {
            let mut cfg = FirstOrderConfig::new(method, params.eta, max_iter);
            cfg.store = store;
            if method == Method::Pgd {
                cfg.perturbation = Some(Perturbation {
                    radius: params.r,
                    threshold: params.g_thres,
                    cooldown: params.t_thres,
                });
            }
            run_first_order_with(obj, x0, &cfg, &mut rng)
        }
    }
}

/// One comparison cell: `method` on the octopus in dimension `dim` for 1000
/// iterations.
pub fn compare_cell(exp: &OctopusExperiment, method: Method, seed: u64) -> Result<RunReport> {
    let params = exp.compare_params()?;
    run_with_params(
        &exp.obj,
        &exp.x0,
        method,
        &params,
        COMPARE_MAX_ITER,
        seed,
        StorePoints::Never,
    )
}

/// Bump start `(0.3, 0.01) + xi`, `xi` uniform in the ball of radius
/// `0.1 * ||(0.3, 0.01)||`.
pub fn bump_start(seed: u64) -> Point {
    let base = Point::from_vec_unchecked(vec![0.3, 0.01]);
    let mut rng = seeded_rng(seed);
    base.add(&sample_ball(&mut rng, 2, 0.1 * base.norm()))
}

/// GD treats the Huber term as part of `f`; every other method uses its prox.
pub fn bump_objective(method: Method) -> CompositeObjective {
    match method {
        Method::Gd | Method::Pgd => bump_gd_objective(),
        Method::Pd | Method::Ppd => bump_prox_objective(),
    }
}

/// One sweep trial; `true` when the final point lies within
/// [`SWEEP_SUCCESS_RADIUS`] of a bump minimizer.
pub fn bump_trial(method: Method, eta: f64, seed: u64, max_iter: usize) -> Result<bool> {
    let obj = bump_objective(method);
    let x0 = bump_start(seed);
    let mut cfg = FirstOrderConfig::new(method, eta, max_iter);
    cfg.store = StorePoints::Never;
    let mut rng = seeded_rng(seed);
    let report = run_first_order_with(&obj, &x0, &cfg, &mut rng)?;
    Ok(!report.termination.is_abort()
        && report.final_point.is_finite()
        && bump_minimizer_distance(&report.final_point) <= SWEEP_SUCCESS_RADIUS)
}

/// Logarithmic grid of `n` stepsizes from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Success rate per stepsize for one method.
pub fn sweep_rates(
    method: Method,
    grid: &[f64],
    trials: usize,
    seed: u64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    grid.par_iter()
        .enumerate()
        .map(|(i, &eta)| {
            let mut ok = 0usize;
            for k in 0..trials {
                let s = cell_seed(seed, &[i as u64, k as u64]);
                if bump_trial(method, eta, s, max_iter)? {
                    ok += 1;
                }
            }
            Ok(ok as f64 / trials as f64)
        })
        .collect()
}

/// Largest grid stepsize whose success rate reaches `level`.
pub fn largest_stable_eta(grid: &[f64], rates: &[f64], level: f64) -> Option<f64> {
    grid.iter()
        .zip(rates)
        .filter(|(_, r)| **r >= level)
        .map(|(e, _)| *e)
        .fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.max(e))))
}
