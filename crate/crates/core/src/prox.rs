//! Proximal operator of the l1 term, the forward-backward step, and the
//! gradient mapping `G(x) = x - prox_{eta g}(x - eta grad f(x))`.

use crate::benchmarks::huber_prox;
use crate::error::{Error, Result};
use crate::objective::{CompositeObjective, Penalty, Point};

/// Output of one proximal-descent step from `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProxStepResult {
    /// `prox_{eta g}(pre_prox)`
    pub next: Point,
    /// `x - eta * grad f(x)`
    pub pre_prox: Point,
    /// `x - next`
    pub gradient_mapping: Point,
    pub gm_norm: f64,
}

fn check_theta(theta: f64) -> Result<()> {
    if theta >= 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "threshold must be finite and nonnegative, got {theta}"
        )))
    }
}

#[inline]
fn shrink(y: f64, theta: f64) -> f64 {
    let m = y.abs() - theta;
    // collapsed coordinates are +0.0, never -0.0
    if m > 0.0 {
        m.copysign(y)
    } else {
        0.0
    }
}

/// Coordinatewise soft thresholding, the prox of `theta * ||.||_1`.
pub fn soft_threshold(y: &Point, theta: f64) -> Result<Point> {
    check_theta(theta)?;
    Ok(y.map(|v| shrink(v, theta)))
}

/// `soft_threshold(y, theta) - y`, i.e. `min(theta, |y_i|) * sign(-y_i)`.
///
/// Its Euclidean norm never exceeds `theta * sqrt(d)`.
pub fn prox_displacement(y: &Point, theta: f64) -> Result<Point> {
    check_theta(theta)?;
    Ok(y.map(|v| {
        let m = theta.min(v.abs());
        if v > 0.0 {
            -m
        } else if v < 0.0 {
            m
        } else {
            0.0
        }
    }))
}

impl Penalty {
    /// `prox_{step * g}(y)`
    pub fn prox(&self, y: &Point, step: f64) -> Result<Point> {
        match *self {
            Penalty::L1 { lambda } => soft_threshold(y, step * lambda),
            Penalty::Huber { weight, mu } => Ok(huber_prox(mu, y, step * weight)),
        }
    }
}

/// One forward-backward step `prox_{eta g}(x - eta grad f(x))`.
pub fn prox_step(obj: &CompositeObjective, x: &Point, eta: f64) -> Result<ProxStepResult> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::invalid(format!("stepsize must be positive, got {eta}")));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite {
            what: "iterate",
            point: x.to_vec(),
        });
    }
    let grad = obj.eval_grad_f(x)?;
    let pre_prox = x.axpy(-eta, &grad);
    let next = obj.penalty().prox(&pre_prox, eta)?;
    if !next.is_finite() {
        return Err(Error::NonFinite {
            what: "proximal step",
            point: x.to_vec(),
        });
    }
    let gradient_mapping = x.sub(&next);
    let gm_norm = gradient_mapping.norm();
    Ok(ProxStepResult {
        next,
        pre_prox,
        gradient_mapping,
        gm_norm,
    })
}

/// `G_eta(x) = x - prox_{eta g}(x - eta grad f(x))`; zero exactly at first-order
/// stationary points of `phi`.
pub fn gradient_mapping(obj: &CompositeObjective, x: &Point, eta: f64) -> Result<Point> {
    prox_step(obj, x, eta).map(|s| s.gradient_mapping)
}

/// The gradient mapping scaled by `ell` with step `1/ell`:
/// `ell * (x - prox_{g/ell}(x - grad f(x) / ell))`.
pub fn scaled_gradient_mapping(obj: &CompositeObjective, x: &Point, ell: f64) -> Result<Point> {
    if !(ell > 0.0) {
        return Err(Error::invalid(format!("ell must be positive, got {ell}")));
    }
    gradient_mapping(obj, x, 1.0 / ell).map(|g| g.scale(ell))
}
