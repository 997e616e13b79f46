use nalgebra::DMatrix;

use super::fd::fd_hessian_from_gradient;
use crate::objective::{Point, SmoothObjective};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzAudit {
    /// Largest observed `||grad f(x) - grad f(y)|| / ||x - y||`.
    pub ell_hat: f64,
    /// Largest observed `||hess f(x) - hess f(y)||_2 / ||x - y||`.
    pub rho_hat: f64,
    pub pairs_used: usize,
    /// Pairs dropped because the points coincided or an evaluation failed.
    pub pairs_skipped: usize,
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Sampled lower bounds on the gradient and Hessian Lipschitz constants over
/// `n` pairs drawn from `sampler`. Missing analytic Hessians are replaced by
/// differences of the gradient.
pub fn lipschitz_audit<S>(f: &dyn SmoothObjective, mut sampler: S, n: usize) -> LipschitzAudit
where
    S: FnMut() -> Point,
{
    let hess = |x: &Point| -> Option<DMatrix<f64>> {
        match f.hessian(x) {
            Ok(Some(h)) => Some(h),
            Ok(None) => fd_hessian_from_gradient(|p| f.gradient(p), x, 1e-5).ok(),
            Err(_) => None,
        }
    };
    let mut out = LipschitzAudit {
        ell_hat: 0.0,
        rho_hat: 0.0,
        pairs_used: 0,
        pairs_skipped: 0,
    };
    for _ in 0..n {
        let x = sampler();
        let y = sampler();
        let dist = x.distance(&y);
        if dist == 0.0 {
            out.pairs_skipped += 1;
            continue;
        }
        let (Ok(gx), Ok(gy)) = (f.gradient(&x), f.gradient(&y)) else {
            out.pairs_skipped += 1;
            continue;
        };
        let (Some(hx), Some(hy)) = (hess(&x), hess(&y)) else {
            out.pairs_skipped += 1;
            continue;
        };
        out.ell_hat = out.ell_hat.max(gx.distance(&gy) / dist);
        out.rho_hat = out.rho_hat.max(spectral_norm(&(hx - hy)) / dist);
        out.pairs_used += 1;
    }
    out
}
