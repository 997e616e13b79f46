use crate::error::{Error, Result};

/// Inputs and derived hyperparameters of perturbed proximal descent.
#[derive(Clone, Debug, PartialEq)]
pub struct PpdParams {
    pub chi: f64,
    pub eta: f64,
    /// Perturbation ball radius.
    pub r: f64,
    pub g_thres: f64,
    pub phi_thres: f64,
    pub t_thres: usize,
    pub ell: f64,
    pub rho: f64,
    pub eps: f64,
    pub c: f64,
    pub delta: f64,
    pub delta_phi: f64,
    pub dim: usize,
    /// Conditions outside the analyzed regime; also sent to `log::warn!`.
    pub warnings: Vec<String>,
}

/// Iteration cap used when none is given.
pub const MAX_ITER_CAP: usize = 1_000_000;

/// Derive `chi, eta, r, g_thres, phi_thres, t_thres` from the algorithm inputs.
///
/// `c > 1` and `eps > ell^2 / rho` are allowed but produce warnings.
pub fn make_ppd_params(
    ell: f64,
    rho: f64,
    eps: f64,
    c: f64,
    delta: f64,
    delta_phi: f64,
    dim: usize,
) -> Result<PpdParams> {
    for (name, v) in [
        ("ell", ell),
        ("rho", rho),
        ("eps", eps),
        ("c", c),
        ("delta", delta),
        ("delta_phi", delta_phi),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!(
                "{name} must be finite and positive, got {v}"
            )));
        }
    }
    if delta >= 1.0 {
        return Err(Error::invalid(format!("delta must be below 1, got {delta}")));
    }
    if dim == 0 {
        return Err(Error::invalid("dim must be at least 1"));
    }

    let d = dim as f64;
    let chi = 3.0 * (d * ell * delta_phi / (c * eps * eps * delta)).ln().max(4.0);
    let chi2 = chi * chi;
    let sc = c.sqrt();
    let t_thres_real = (chi / (c * c)) * ell / (rho * eps).sqrt();
    if t_thres_real > usize::MAX as f64 / 4.0 {
        return Err(Error::invalid(format!(
            "escape window {t_thres_real} is too long"
        )));
    }

    let mut warnings = Vec::new();
    if c > 1.0 {
        warnings.push(format!(
            "c = {c} exceeds 1; outside the analyzed regime but permitted"
        ));
    }
    if eps > ell * ell / rho {
        warnings.push(format!(
            "eps = {eps} exceeds ell^2/rho = {}",
            ell * ell / rho
        ));
    }
    for w in &warnings {
        log::warn!("{w}");
    }

    Ok(PpdParams {
        chi,
        eta: c / ell,
        r: sc / chi2 * eps / ell,
        g_thres: sc / chi2 * eps,
        phi_thres: c / (chi2 * chi) * (eps.powi(3) / rho).sqrt(),
        t_thres: (t_thres_real.ceil() as usize).max(1),
        ell,
        rho,
        eps,
        c,
        delta,
        delta_phi,
        dim,
        warnings,
    })
}

impl PpdParams {
    /// Replace the perturbation radius, e.g. with a fixed experimental norm.
    pub fn with_radius(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("radius must be positive, got {r}")));
        }
        self.r = r;
        Ok(self)
    }

    /// `(chi^4 / c^3) * ell * delta_phi / eps^2`.
    pub fn iteration_bound(&self) -> f64 {
        self.chi.powi(4) / self.c.powi(3) * self.ell * self.delta_phi / (self.eps * self.eps)
    }

    /// Ten times [`PpdParams::iteration_bound`], capped at [`MAX_ITER_CAP`].
    pub fn default_max_iter(&self) -> usize {
        let n = (10.0 * self.iteration_bound()).ceil();
        if n >= MAX_ITER_CAP as f64 {
            MAX_ITER_CAP
        } else {
            (n as usize).max(1)
        }
    }
}
