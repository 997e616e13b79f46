use std::fmt;

use nalgebra::DMatrix;

use super::fd::{fd_hessian, FD_HESS_STEP};
use crate::error::{Error, Result};
use crate::objective::{CompositeObjective, Point};
use crate::prox::gradient_mapping;

/// Largest dimension the dense classifier accepts.
pub const MAX_CLASSIFY_DIM: usize = 64;

const SYMMETRY_TOL: f64 = 1e-10;

/// Smallest eigenvalue of a symmetric matrix by full eigendecomposition.
pub fn min_eigenvalue(h: &DMatrix<f64>) -> Result<f64> {
    if h.nrows() != h.ncols() || h.nrows() == 0 {
        return Err(Error::invalid(format!(
            "expected a nonempty square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let scale = h.amax().max(1.0);
    let asym = (h - h.transpose()).amax();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::invalid(format!(
            "matrix is not symmetric (max asymmetry {asym:e})"
        )));
    }
    if !h.iter().all(|v| v.is_finite()) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let sym = (h + h.transpose()) * 0.5;
    Ok(sym.symmetric_eigen().eigenvalues.min())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    EpsSosp,
    FirstOrderOnly,
    /// First-order stationary with curvature at or below `-m` for the
    /// nondegeneracy margin `m` supplied by the caller.
    SaddleRegion,
    NonStationary,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::EpsSosp => "eps_sosp",
            Verdict::FirstOrderOnly => "first_order_only",
            Verdict::SaddleRegion => "saddle_region",
            Verdict::NonStationary => "non_stationary",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationarityVerdict {
    pub gm_norm: f64,
    pub min_eig: f64,
    pub eps: f64,
    pub rho: f64,
    pub verdict: Verdict,
}

/// Second-order stationarity test: `||G_eta(x)|| <= eps` and
/// `lambda_min(hess f(x)) >= -sqrt(rho * eps)`.
pub fn classify_point(
    obj: &CompositeObjective,
    x: &Point,
    eps: f64,
    rho: f64,
    eta: f64,
) -> Result<StationarityVerdict> {
    classify_point_with_margin(obj, x, eps, rho, eta, None)
}

/// [`classify_point`] with an optional nondegenerate-saddle margin `m`: a
/// first-order point failing the curvature test with `min_eig <= -m` is
/// reported as [`Verdict::SaddleRegion`].
pub fn classify_point_with_margin(
    obj: &CompositeObjective,
    x: &Point,
    eps: f64,
    rho: f64,
    eta: f64,
    margin: Option<f64>,
) -> Result<StationarityVerdict> {
    for (name, v) in [("eps", eps), ("rho", rho), ("eta", eta)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let gm_norm = gradient_mapping(obj, x, eta)?.norm();
    let hess = match obj.eval_hessian_f(x)? {
        Some(h) => h,
        None if obj.dim() <= MAX_CLASSIFY_DIM => {
            fd_hessian(|p| obj.smooth().value(p), x, FD_HESS_STEP)?
        }
        None => {
            return Err(Error::Unsupported(format!(
                "no analytic Hessian and d = {} exceeds {MAX_CLASSIFY_DIM}",
                obj.dim()
            )))
        }
    };
    let min_eig = min_eigenvalue(&hess)?;
    let verdict = if gm_norm > eps {
        Verdict::NonStationary
    } else if min_eig >= -(rho * eps).sqrt() {
        Verdict::EpsSosp
    } else if margin.is_some_and(|m| min_eig <= -m) {
        Verdict::SaddleRegion
    } else {
        Verdict::FirstOrderOnly
    };
    Ok(StationarityVerdict {
        gm_norm,
        min_eig,
        eps,
        rho,
        verdict,
    })
}
