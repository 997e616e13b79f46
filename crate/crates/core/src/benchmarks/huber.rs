//! Huber smoothing of the norm.

use crate::objective::Point;

/// Norm-based Huber `H_mu(x) = ||x||^2 / (2 mu)` for `||x|| <= mu`, else
/// `||x|| - mu / 2`. The coordinatewise variant sums the scalar version.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HuberKind {
    #[default]
    Norm,
    Coordinatewise,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Huber {
    pub mu: f64,
    pub kind: HuberKind,
}

fn scalar_value(mu: f64, t: f64) -> f64 {
    let a = t.abs();
    if a <= mu {
        a * a / (2.0 * mu)
    } else {
        a - mu / 2.0
    }
}

pub fn huber_value(mu: f64, x: &Point) -> f64 {
    scalar_value(mu, x.norm())
}

pub fn huber_gradient(mu: f64, x: &Point) -> Point {
    let n = x.norm();
    if n <= mu {
        x.scale(1.0 / mu)
    } else {
        x.scale(1.0 / n)
    }
}

/// `prox_{alpha H_mu}(v) = (1 - alpha / max(||v||, mu + alpha)) v`.
pub fn huber_prox(mu: f64, v: &Point, alpha: f64) -> Point {
    v.scale(1.0 - alpha / v.norm().max(mu + alpha))
}

impl Huber {
    pub fn new(mu: f64) -> Self {
        Huber {
            mu,
            kind: HuberKind::Norm,
        }
    }

    pub fn coordinatewise(mu: f64) -> Self {
        Huber {
            mu,
            kind: HuberKind::Coordinatewise,
        }
    }

    pub fn value(&self, x: &Point) -> f64 {
        match self.kind {
            HuberKind::Norm => huber_value(self.mu, x),
            HuberKind::Coordinatewise => x.iter().map(|t| scalar_value(self.mu, *t)).sum(),
        }
    }

    pub fn gradient(&self, x: &Point) -> Point {
        match self.kind {
            HuberKind::Norm => huber_gradient(self.mu, x),
            HuberKind::Coordinatewise => x.map(|t| t / t.abs().max(self.mu)),
        }
    }

    pub fn prox(&self, v: &Point, alpha: f64) -> Point {
        match self.kind {
            HuberKind::Norm => huber_prox(self.mu, v, alpha),
            HuberKind::Coordinatewise => {
                let m = self.mu + alpha;
                v.map(|t| t * (1.0 - alpha / t.abs().max(m)))
            }
        }
    }
}
