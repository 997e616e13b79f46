use rand::Rng;
use rand_distr::StandardNormal;

use super::params::PpdParams;
use super::report::{abort_kind, Recorder, RunReport, StorePoints, Termination};
use crate::error::{Error, Result};
use crate::objective::{CompositeObjective, Point};
use crate::prox::prox_step;

/// A point drawn uniformly from the closed ball of the given radius.
pub fn sample_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Point {
    loop {
        let g = Point::from_fn(dim, |_| rng.sample::<f64, _>(StandardNormal));
        let n = g.norm();
        if n > 0.0 {
            let u: f64 = rng.random();
            let s = radius * u.powf(1.0 / dim as f64) / n;
            let p = g.scale(s);
            // rounding may leave the norm a hair above the radius
            let pn = p.norm();
            return if pn > radius { p.scale(radius / pn) } else { p };
        }
    }
}

pub(crate) fn check_start(obj: &CompositeObjective, x0: &Point, max_iter: usize) -> Result<()> {
    obj.check_dim(x0)?;
    if max_iter == 0 {
        return Err(Error::invalid("max_iter must be at least 1"));
    }
    Ok(())
}

/// Perturbed proximal descent with the default trace storage.
pub fn run_ppd<R: Rng + ?Sized>(
    obj: &CompositeObjective,
    x0: &Point,
    params: &PpdParams,
    max_iter: usize,
    rng: &mut R,
) -> Result<RunReport> {
    run_ppd_traced(obj, x0, params, max_iter, rng, StorePoints::Auto)
}

/// Perturbed proximal descent.
///
/// Whenever the gradient mapping is below `g_thres` and no escape window is
/// open, the current iterate becomes the anchor and is kicked by uniform ball
/// noise of radius `r`. When the window closes after `t_thres` steps without
/// `phi` dropping by at least `phi_thres` below the anchor's value, the anchor
/// is returned.
pub fn run_ppd_traced<R: Rng + ?Sized>(
    obj: &CompositeObjective,
    x0: &Point,
    params: &PpdParams,
    max_iter: usize,
    rng: &mut R,
    store: StorePoints,
) -> Result<RunReport> {
    check_start(obj, x0, max_iter)?;
    if params.dim != obj.dim() {
        return Err(Error::Dimension {
            expected: obj.dim(),
            got: params.dim,
        });
    }
    let t_thres = params.t_thres as i64;
    let mut rec = Recorder::new(obj.dim(), store);
    let mut x = x0.clone();
    let mut last_phi = f64::NAN;
    let mut t_noise: i64 = -t_thres - 1;
    let mut anchor: Option<(Point, f64)> = None;

    let finish = |rec: Recorder, final_point, final_phi, iterations, termination, abort| RunReport {
        method: "PPD".to_string(),
        final_point,
        final_phi,
        iterations,
        termination,
        trace: rec.trace,
        perturbations: rec.perturbations,
        abort,
    };

    for t in 0..max_iter {
        let ti = t as i64;
        let body = (|| -> Result<Option<(Point, f64)>> {
            let mut step = prox_step(obj, &x, params.eta)?;
            let mut perturbed = false;
            if step.gm_norm < params.g_thres && ti - t_noise > t_thres {
                let anchor_phi = obj.eval_phi(&x)?;
                let noise = sample_ball(rng, obj.dim(), params.r);
                let kicked = x.add(&noise);
                rec.perturbations.push(super::report::PerturbationEvent {
                    iteration: t,
                    anchor: x.clone(),
                    noise,
                });
                anchor = Some((x.clone(), anchor_phi));
                t_noise = ti;
                x = kicked;
                step = prox_step(obj, &x, params.eta)?;
                perturbed = true;
            }
            let phi = obj.eval_phi(&x)?;
            last_phi = phi;
            let in_window = anchor.is_some() && ti - t_noise <= t_thres;
            rec.push(t, phi, step.gm_norm, perturbed, in_window, &x);
            if ti - t_noise == t_thres {
                if let Some((a, a_phi)) = &anchor {
                    if phi - a_phi > -params.phi_thres {
                        return Ok(Some((a.clone(), *a_phi)));
                    }
                }
            }
            x = step.next;
            Ok(None)
        })();
        match body {
            Ok(None) => {}
            Ok(Some((a, a_phi))) => {
                return Ok(finish(rec, a, a_phi, t, Termination::PpdCertified, None));
            }
            Err(e) => {
                let kind = abort_kind(&e);
                return Ok(finish(rec, x, last_phi, t, kind, Some(e.at_iteration(t))));
            }
        }
    }

    let tail = (|| -> Result<(f64, f64)> {
        let step = prox_step(obj, &x, params.eta)?;
        Ok((obj.eval_phi(&x)?, step.gm_norm))
    })();
    match tail {
        Ok((phi, gm)) => {
            let in_window = anchor.is_some() && max_iter as i64 - t_noise <= t_thres;
            rec.push(max_iter, phi, gm, false, in_window, &x);
            Ok(finish(rec, x, phi, max_iter, Termination::MaxIter, None))
        }
        Err(e) => {
            let kind = abort_kind(&e);
            Ok(finish(rec, x, last_phi, max_iter, kind, Some(e.at_iteration(max_iter))))
        }
    }
}
