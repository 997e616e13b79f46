//! Scale units of the escape analysis and the heuristic upper bounds on the l1
//! weight under which the escape argument goes through.

use crate::error::{Error, Result};

/// Function-value, gradient, distance and time units of the escape analysis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProofUnits {
    pub script_f: f64,
    pub script_g: f64,
    pub script_s: f64,
    pub script_t: f64,
    /// `ell / gamma`
    pub kappa: f64,
    /// `ln(d kappa / delta)`
    pub log_term: f64,
    pub eta: f64,
    pub ell: f64,
    pub rho: f64,
    pub gamma: f64,
    pub delta: f64,
    pub dim: usize,
}

/// `F = eta ell (gamma^3 / rho^2) L^-3`, `G = sqrt(eta ell) (gamma^2 / rho) L^-2`,
/// `S = sqrt(eta ell) (gamma / rho) L^-1`, `T = L / (eta gamma)` with
/// `L = ln(d kappa / delta)`, `kappa = ell / gamma`.
pub fn proof_units(
    eta: f64,
    ell: f64,
    rho: f64,
    gamma: f64,
    delta: f64,
    dim: usize,
) -> Result<ProofUnits> {
    for (name, v) in [
        ("eta", eta),
        ("ell", ell),
        ("rho", rho),
        ("gamma", gamma),
        ("delta", delta),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let kappa = ell / gamma;
    let arg = dim as f64 * kappa / delta;
    if !(arg > 1.0) {
        return Err(Error::invalid(format!(
            "d * kappa / delta = {arg} must exceed 1"
        )));
    }
    let l = arg.ln();
    let el = eta * ell;
    Ok(ProofUnits {
        script_f: el * gamma.powi(3) / (rho * rho) / l.powi(3),
        script_g: el.sqrt() * gamma * gamma / rho / (l * l),
        script_s: el.sqrt() * gamma / rho / l,
        script_t: l / (eta * gamma),
        kappa,
        log_term: l,
        eta,
        ell,
        rho,
        gamma,
        delta,
        dim,
    })
}

/// Smallest `c >= 3` with `c >= 2 + ln(400 c)`, by bisection.
pub fn hat_c_root() -> f64 {
    let h = |c: f64| c - 2.0 - (400.0 * c).ln();
    let (mut lo, mut hi) = (3.0, 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Free constants of the bounds; `None` picks the defaults
/// `hat_c = root of c = 2 + ln(400 c)`, `mu = delta / (2 sqrt d)`, `theta = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LambdaBoundOptions {
    pub hat_c: Option<f64>,
    pub mu: Option<f64>,
    pub theta: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaBoundReport {
    /// Bound from the lower bound on the coupled-difference sequence.
    pub bound1: f64,
    /// Bound from projection monotonicity, worst case `v_move` parallel to
    /// the boundary normal.
    pub bound2: f64,
    pub lambda: f64,
    pub lambda_ok: bool,
    /// `eta * ell >= 1`: the geometric factor `(1 - eta ell)^(hat_c T)` is not
    /// a contraction and both bounds collapse to zero.
    pub degenerate: bool,
    pub hat_c: f64,
    pub mu: f64,
    pub theta: f64,
    pub units: ProofUnits,
}

/// Heuristic check of an l1 weight against the two upper bounds of the escape
/// analysis. Advisory only; the constants inside are proof artifacts.
pub fn lambda_bound_diagnostic(
    units: &ProofUnits,
    lambda: f64,
    opts: LambdaBoundOptions,
) -> LambdaBoundReport {
    let d = units.dim as f64;
    let hat_c = opts.hat_c.unwrap_or_else(hat_c_root);
    let mu = opts.mu.unwrap_or(units.delta / (2.0 * d.sqrt()));
    let theta = opts.theta.unwrap_or(1.0);
    let (eta, ell, gamma, rho) = (units.eta, units.ell, units.gamma, units.rho);
    let el = eta * ell;
    let degenerate = el >= 1.0;

    let (bound1, bound2) = if degenerate {
        (0.0, 0.0)
    } else {
        let q = (1.0 - el).powf(hat_c * units.script_t);
        let kick = 1.0 + eta * gamma * theta;
        let l2 = units.log_term * units.log_term;
        let num = q * mu / (units.kappa * l2) * eta.sqrt() * ell.powf(1.5) * gamma / rho * kick;
        let den = 2.0 * d.sqrt() * ((1.0 - el) * (1.0 - q) + el);
        let radius = units.script_s / (units.kappa * units.log_term);
        let floor = q * mu * radius * kick;
        (num / den, floor / (eta * d.sqrt()))
    };
    let lambda_ok = lambda == 0.0 || (lambda < bound1 && lambda < bound2);
    LambdaBoundReport {
        bound1,
        bound2,
        lambda,
        lambda_ok,
        degenerate,
        hat_c,
        mu,
        theta,
        units: *units,
    }
}
