use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::ppd::{check_start, sample_ball};
use super::report::{
    abort_kind, PerturbationEvent, Recorder, RunReport, StorePoints, Termination,
};
use crate::error::{Error, Result};
use crate::objective::{CompositeObjective, Penalty, Point};
use crate::prox::prox_step;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Subgradient descent on `phi`, `sign(0) = 0`.
    Gd,
    /// `Gd` with ball perturbations.
    Pgd,
    /// Proximal descent.
    Pd,
    /// Perturbed proximal descent.
    Ppd,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Ppd, Method::Pd, Method::Gd, Method::Pgd];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Gd => "GD",
            Method::Pgd => "PGD",
            Method::Pd => "PD",
            Method::Ppd => "PPD",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gd" => Ok(Method::Gd),
            "pgd" => Ok(Method::Pgd),
            "pd" | "prox" => Ok(Method::Pd),
            "ppd" => Ok(Method::Ppd),
            _ => Err(Error::invalid(format!(
                "unknown method {s:?}; expected gd, pgd, pd or ppd"
            ))),
        }
    }
}

/// Ball perturbations for the first-order baselines: when the step length
/// `||x_t - x_{t+1}||` drops below `threshold` and more than `cooldown`
/// iterations have passed since the last kick, add noise of norm at most
/// `radius`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Perturbation {
    pub radius: f64,
    pub threshold: f64,
    pub cooldown: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrderConfig {
    pub method: Method,
    pub eta: f64,
    pub max_iter: usize,
    pub perturbation: Option<Perturbation>,
    /// Stop once the gradient-mapping norm falls below this value (runs
    /// without perturbation only).
    pub gm_tol: Option<f64>,
    pub store: StorePoints,
}

impl FirstOrderConfig {
    pub fn new(method: Method, eta: f64, max_iter: usize) -> Self {
        FirstOrderConfig {
            method,
            eta,
            max_iter,
            perturbation: None,
            gm_tol: None,
            store: StorePoints::Auto,
        }
    }

    pub fn with_perturbation(mut self, p: Perturbation) -> Self {
        self.perturbation = Some(p);
        self
    }
}

fn penalty_subgradient(penalty: Penalty, x: &Point) -> Point {
    match penalty {
        Penalty::L1 { lambda } => x.map(|v| {
            if v > 0.0 {
                lambda
            } else if v < 0.0 {
                -lambda
            } else {
                0.0
            }
        }),
        Penalty::Huber { weight, mu } => crate::benchmarks::huber_gradient(mu, x).scale(weight),
    }
}

struct Step {
    next: Point,
    gm_norm: f64,
    length: f64,
}

fn take_step(obj: &CompositeObjective, x: &Point, method: Method, eta: f64) -> Result<Step> {
    let prox = prox_step(obj, x, eta)?;
    match method {
        Method::Pd | Method::Ppd => Ok(Step {
            length: prox.gm_norm,
            gm_norm: prox.gm_norm,
            next: prox.next,
        }),
        Method::Gd | Method::Pgd => {
            let next = prox.pre_prox.axpy(-eta, &penalty_subgradient(obj.penalty(), x));
            if !next.is_finite() {
                return Err(Error::NonFinite {
                    what: "gradient step",
                    point: x.to_vec(),
                });
            }
            Ok(Step {
                length: x.distance(&next),
                gm_norm: prox.gm_norm,
                next,
            })
        }
    }
}

/// Fixed-stepsize GD, PGD or PD (see [`run_first_order_with`]).
pub fn run_first_order<R: Rng + ?Sized>(
    obj: &CompositeObjective,
    x0: &Point,
    method: Method,
    eta: f64,
    max_iter: usize,
    perturbation: Option<Perturbation>,
    rng: &mut R,
) -> Result<RunReport> {
    let mut cfg = FirstOrderConfig::new(method, eta, max_iter);
    cfg.perturbation = perturbation;
    run_first_order_with(obj, x0, &cfg, rng)
}

/// Fixed-stepsize baseline run. Trace rows always report the proximal
/// gradient-mapping norm at the current iterate, whatever the method.
pub fn run_first_order_with<R: Rng + ?Sized>(
    obj: &CompositeObjective,
    x0: &Point,
    cfg: &FirstOrderConfig,
    rng: &mut R,
) -> Result<RunReport> {
    check_start(obj, x0, cfg.max_iter)?;
    if !(cfg.eta > 0.0) || !cfg.eta.is_finite() {
        return Err(Error::invalid(format!(
            "stepsize must be positive, got {}",
            cfg.eta
        )));
    }
    match (cfg.method, cfg.perturbation) {
        (Method::Ppd, _) => {
            return Err(Error::invalid("use run_ppd for perturbed proximal descent"))
        }
        (Method::Pgd, None) => return Err(Error::invalid("PGD needs a perturbation schedule")),
        (_, Some(p)) if !(p.radius > 0.0) || !(p.threshold >= 0.0) => {
            return Err(Error::invalid(format!("bad perturbation schedule {p:?}")))
        }
        _ => {}
    }

    let mut rec = Recorder::new(obj.dim(), cfg.store);
    let mut x = x0.clone();
    let mut last_phi = f64::NAN;
    let mut t_noise: Option<usize> = None;

    let finish = |rec: Recorder, final_point, final_phi, iterations, termination, abort| RunReport {
        method: cfg.method.as_str().to_string(),
        final_point,
        final_phi,
        iterations,
        termination,
        trace: rec.trace,
        perturbations: rec.perturbations,
        abort,
    };

    for t in 0..cfg.max_iter {
        let body = (|| -> Result<bool> {
            let mut step = take_step(obj, &x, cfg.method, cfg.eta)?;
            let mut perturbed = false;
            if let Some(p) = cfg.perturbation {
                let ready = t_noise.is_none_or(|tn| t - tn > p.cooldown);
                if step.length < p.threshold && ready {
                    let noise = sample_ball(rng, obj.dim(), p.radius);
                    let kicked = x.add(&noise);
                    rec.perturbations.push(PerturbationEvent {
                        iteration: t,
                        anchor: x.clone(),
                        noise,
                    });
                    x = kicked;
                    t_noise = Some(t);
                    step = take_step(obj, &x, cfg.method, cfg.eta)?;
                    perturbed = true;
                }
            }
            let phi = obj.eval_phi(&x)?;
            last_phi = phi;
            let in_window = match (cfg.perturbation, t_noise) {
                (Some(p), Some(tn)) => t - tn <= p.cooldown,
                _ => false,
            };
            rec.push(t, phi, step.gm_norm, perturbed, in_window, &x);
            if cfg.perturbation.is_none() && cfg.gm_tol.is_some_and(|tol| step.gm_norm < tol) {
                return Ok(true);
            }
            x = step.next;
            Ok(false)
        })();
        match body {
            Ok(false) => {}
            Ok(true) => return Ok(finish(rec, x, last_phi, t, Termination::GmBelowTol, None)),
            Err(e) => {
                let kind = abort_kind(&e);
                return Ok(finish(rec, x, last_phi, t, kind, Some(e.at_iteration(t))));
            }
        }
    }

    let n = cfg.max_iter;
    let tail = (|| -> Result<(f64, f64)> {
        let step = prox_step(obj, &x, cfg.eta)?;
        Ok((obj.eval_phi(&x)?, step.gm_norm))
    })();
    match tail {
        Ok((phi, gm)) => {
            let in_window = match (cfg.perturbation, t_noise) {
                (Some(p), Some(tn)) => n - tn <= p.cooldown,
                _ => false,
            };
            rec.push(n, phi, gm, false, in_window, &x);
            Ok(finish(rec, x, phi, n, Termination::MaxIter, None))
        }
        Err(e) => {
            let kind = abort_kind(&e);
            Ok(finish(rec, x, last_phi, n, kind, Some(e.at_iteration(n))))
        }
    }
}
