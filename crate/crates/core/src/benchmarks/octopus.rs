//! The octopus family: a piecewise-polynomial strict-saddle function in `R^d`
//! whose legs chain `d - 1` saddles before the global minimum.
//!
//! The function is defined on the first quadrant by case formulas on boxes
//! and continued to the other quadrants by even reflection. Inside
//! `[0, 6 tau]^d` only the "tubes" listed by [`octopus_region`] are covered;
//! points outside every tube are a domain error.

use nalgebra::DMatrix;
use rand::Rng;

use super::sym2_spectral_norm;
use crate::error::{Error, Result};
use crate::objective::{Point, SmoothObjective};

/// Which quartic coefficient the first gluing polynomial uses.
///
/// `Smooth` uses `(5L - 3 gamma) / (2 tau^2)`, which makes the glued function
/// twice continuously differentiable for every `tau`. `Printed` uses
/// `(5L - 3 gamma) / (2 tau)`; the two agree at `tau = 1`, but for other `tau`
/// the printed form has a gradient jump at `x_i = 2 tau` and a spurious
/// stationary point inside each gluing zone.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GluingForm {
    #[default]
    Smooth,
    Printed,
}

/// `(L, gamma, tau, d)` for one member of the octopus family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OctopusParams {
    /// `L`, the curvature of the legs.
    pub sharpness: f64,
    /// `gamma <= L`, the magnitude of the negative curvature at each saddle.
    pub gamma: f64,
    /// `tau`, the leg width.
    pub tau: f64,
    pub dim: usize,
    pub form: GluingForm,
}

impl OctopusParams {
    pub fn new(sharpness: f64, gamma: f64, tau: f64, dim: usize) -> Result<Self> {
        let p = OctopusParams {
            sharpness,
            gamma,
            tau,
            dim,
            form: GluingForm::Smooth,
        };
        p.validate()?;
        Ok(p)
    }

    /// `L = e, gamma = 1, tau = e`.
    pub fn canonical(dim: usize) -> Self {
        OctopusParams {
            sharpness: std::f64::consts::E,
            gamma: 1.0,
            tau: std::f64::consts::E,
            dim,
            form: GluingForm::Smooth,
        }
    }

    pub fn with_form(mut self, form: GluingForm) -> Self {
        self.form = form;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.sharpness) || !positive(self.gamma) || !positive(self.tau) {
            return Err(Error::invalid(format!(
                "octopus needs positive L, gamma, tau; got {self:?}"
            )));
        }
        if self.gamma > self.sharpness {
            return Err(Error::invalid(format!(
                "octopus needs gamma <= L; got gamma={} L={}",
                self.gamma, self.sharpness
            )));
        }
        if self.dim < 2 {
            return Err(Error::invalid("octopus needs dim >= 2"));
        }
        Ok(())
    }

    fn quartic_coeff(&self) -> f64 {
        let (l, g, t) = (self.sharpness, self.gamma, self.tau);
        match self.form {
            GluingForm::Smooth => (5.0 * l - 3.0 * g) / (2.0 * t * t),
            GluingForm::Printed => (5.0 * l - 3.0 * g) / (2.0 * t),
        }
    }
}

/// `G1(x) = -gamma x^2 + a (x - tau)^3 + b (x - tau)^4` and derivatives 0..=3.
fn g1_all(p: &OctopusParams, x: f64) -> [f64; 4] {
    let (l, g, t) = (p.sharpness, p.gamma, p.tau);
    let a = (-14.0 * l + 10.0 * g) / (3.0 * t);
    let b = p.quartic_coeff();
    let s = x - t;
    let s2 = s * s;
    [
        -g * x * x + a * s2 * s + b * s2 * s2,
        -2.0 * g * x + 3.0 * a * s2 + 4.0 * b * s2 * s,
        -2.0 * g + 6.0 * a * s + 12.0 * b * s2,
        6.0 * a + 24.0 * b * s,
    ]
}

/// `G2(x) = -gamma + c3 u^3 + c4 u^4 + c5 u^5`, `u = x - 2 tau`, derivatives 0..=3.
fn g2_all(p: &OctopusParams, x: f64) -> [f64; 4] {
    let (g, t) = (p.gamma, p.tau);
    let k = p.sharpness + g;
    let c3 = -10.0 * k / t.powi(3);
    let c4 = -15.0 * k / t.powi(4);
    let c5 = -6.0 * k / t.powi(5);
    let u = x - 2.0 * t;
    let u2 = u * u;
    let u3 = u2 * u;
    [
        -g + c3 * u3 + c4 * u2 * u2 + c5 * u3 * u2,
        3.0 * c3 * u2 + 4.0 * c4 * u3 + 5.0 * c5 * u2 * u2,
        6.0 * c3 * u + 12.0 * c4 * u2 + 20.0 * c5 * u3,
        6.0 * c3 + 24.0 * c4 * u + 60.0 * c5 * u2,
    ]
}

/// First auxiliary gluing polynomial, intended for `x` in `[tau, 2 tau]`.
pub fn gluing_g1(p: &OctopusParams, x: f64) -> f64 {
    g1_all(p, x)[0]
}

/// Second auxiliary gluing polynomial, intended for `x` in `[tau, 2 tau]`.
pub fn gluing_g2(p: &OctopusParams, x: f64) -> f64 {
    g2_all(p, x)[0]
}

/// Gluing balance constant `nu` in closed form.
pub fn gluing_balance(p: &OctopusParams) -> f64 {
    let (l, g, t) = (p.sharpness, p.gamma, p.tau);
    match p.form {
        GluingForm::Smooth => (37.0 * l + 13.0 * g) * t * t / 6.0,
        GluingForm::Printed => {
            (26.0 * l + 2.0 * g) / 3.0 * t * t + (-5.0 * l + 3.0 * g) / 2.0 * t.powi(3)
        }
    }
}

/// `nu = -G1(2 tau) + 4 L tau^2`, evaluated through the polynomial.
pub fn gluing_balance_from_g1(p: &OctopusParams) -> f64 {
    -gluing_g1(p, 2.0 * p.tau) + 4.0 * p.sharpness * p.tau * p.tau
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionCase {
    One,
    Two,
}

/// Branch index `i` in `1..=d+1` and case; branch `d + 1` only has case one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OctopusRegion {
    pub branch: usize,
    pub case: RegionCase,
}

fn domain_error(x: &[f64], reason: impl Into<String>) -> Error {
    Error::Domain {
        point: x.to_vec(),
        reason: reason.into(),
    }
}

/// The region containing the first-quadrant point `y`.
///
/// Boxes are closed; on shared faces the lexicographically smallest
/// `(branch, case)` wins, so case one wins at `y_i = tau` and the lower
/// branch's case two wins at `y_i = 2 tau`.
pub fn octopus_region(p: &OctopusParams, y: &[f64]) -> Result<OctopusRegion> {
    let d = p.dim;
    if y.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: y.len(),
        });
    }
    let t = p.tau;
    if let Some(v) = y.iter().find(|v| !(**v >= 0.0 && **v <= 6.0 * t)) {
        return Err(domain_error(
            y,
            format!("coordinate {v} outside [0, 6 tau] = [0, {}]", 6.0 * t),
        ));
    }
    // suffix_low[k]: every y_j with j >= k is <= tau
    let mut suffix_low = vec![true; d + 1];
    for k in (0..d).rev() {
        suffix_low[k] = suffix_low[k + 1] && y[k] <= t;
    }
    for k in 0..d {
        if suffix_low[k + 1] {
            if y[k] <= t {
                return Ok(OctopusRegion {
                    branch: k + 1,
                    case: RegionCase::One,
                });
            }
            if y[k] <= 2.0 * t {
                return Ok(OctopusRegion {
                    branch: k + 1,
                    case: RegionCase::Two,
                });
            }
        }
        if y[k] < 2.0 * t {
            return Err(domain_error(y, "not covered by any octopus region"));
        }
    }
    Ok(OctopusRegion {
        branch: d + 1,
        case: RegionCase::One,
    })
}

/// Declared constants for the octopus (see [`Octopus::new`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OctopusConstants {
    pub nu: f64,
    pub ell: f64,
    pub rho: f64,
}

/// Maximize `f` over a box: coarse grid followed by repeated zoom around the
/// best cell.
fn box_max(f: impl Fn(f64, f64) -> f64, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> f64 {
    const N: usize = 48;
    let mut best = f64::NEG_INFINITY;
    let (mut bx, mut by) = (x0, y0);
    let (mut hx, mut hy) = ((x1 - x0) / N as f64, (y1 - y0) / N as f64);
    for i in 0..=N {
        for j in 0..=N {
            let (x, y) = (x0 + i as f64 * hx, y0 + j as f64 * hy);
            let v = f(x, y);
            if v > best {
                best = v;
                bx = x;
                by = y;
            }
        }
    }
    for _ in 0..30 {
        let (cx, cy) = (bx, by);
        for i in -4i32..=4 {
            for j in -4i32..=4 {
                let x = (cx + i as f64 * hx / 4.0).clamp(x0, x1);
                let y = (cy + j as f64 * hy / 4.0).clamp(y0, y1);
                let v = f(x, y);
                if v > best {
                    best = v;
                    bx = x;
                    by = y;
                }
            }
        }
        hx /= 2.0;
        hy /= 2.0;
    }
    best
}

fn max_over_angle(f: impl Fn(f64) -> f64) -> f64 {
    const N: usize = 64;
    let h = std::f64::consts::PI / N as f64;
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0.0);
    for k in 0..N {
        let v = f(k as f64 * h);
        if v > best {
            best = v;
            arg = k as f64 * h;
        }
    }
    let mut step = h;
    for _ in 0..30 {
        for a in [arg - step, arg + step] {
            let v = f(a);
            if v > best {
                best = v;
                arg = a;
            }
        }
        step /= 2.0;
    }
    best
}

/// Relative inflation applied to the maximized curvature constants.
const DECLARED_MARGIN: f64 = 1e-3;

/// `nu`, and `ell`, `rho` from maximizing the per-region Hessian norm and the
/// third-derivative norm over the gluing zone.
pub fn octopus_constants(p: &OctopusParams) -> OctopusConstants {
    let (l, g, t) = (p.sharpness, p.gamma, p.tau);
    let xs = (t, 2.0 * t);
    let ys = (0.0, t);
    let block_norm = |x: f64, y: f64| {
        let g1 = g1_all(p, x);
        let g2 = g2_all(p, x);
        sym2_spectral_norm(g1[2] + g2[2] * y * y, 2.0 * g2[1] * y, 2.0 * g2[0])
    };
    let last_leg = box_max(|x, _| g1_all(p, x)[2].abs(), xs, (0.0, 0.0));
    let ell = (2.0 * l)
        .max(2.0 * g)
        .max(box_max(block_norm, xs, ys))
        .max(last_leg);

    let tensor_norm = |x: f64, y: f64| {
        let g1 = g1_all(p, x);
        let g2 = g2_all(p, x);
        let fxxx = g1[3] + g2[3] * y * y;
        let fxxy = 2.0 * g2[2] * y;
        let fxyy = 2.0 * g2[1];
        max_over_angle(|a| {
            let (s, c) = a.sin_cos();
            (fxxx * c * c * c + 3.0 * fxxy * c * c * s + 3.0 * fxyy * c * s * s).abs()
        })
    };
    let rho = box_max(tensor_norm, xs, ys).max(box_max(|x, _| g1_all(p, x)[3].abs(), xs, (0.0, 0.0)));

    OctopusConstants {
        nu: gluing_balance(p),
        ell: ell * (1.0 + DECLARED_MARGIN),
        rho: rho * (1.0 + DECLARED_MARGIN),
    }
}

/// First-quadrant saddle representatives and the global minimizer of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct OctopusCatalog {
    /// `(4 tau * 1_i, 0_{d-i})` for `i = 0..d-1`; `i = 0` is the origin.
    pub saddles: Vec<Point>,
    pub global_min: Point,
    pub min_value: f64,
}

pub fn octopus_catalog(p: &OctopusParams) -> OctopusCatalog {
    let d = p.dim;
    let leg = 4.0 * p.tau;
    let saddles = (0..d)
        .map(|i| Point::from_fn(d, |j| if j < i { leg } else { 0.0 }))
        .collect();
    OctopusCatalog {
        saddles,
        global_min: Point::from_fn(d, |_| leg),
        min_value: -(d as f64) * gluing_balance(p),
    }
}

/// First-order stationary points of `f + lambda ||x||_1` that correspond to the
/// cataloged saddles: leg coordinates sit at `4 tau - lambda / (2 L)`.
pub fn composite_saddles(p: &OctopusParams, lambda: f64) -> Vec<Point> {
    let leg = 4.0 * p.tau - lambda / (2.0 * p.sharpness);
    (0..p.dim)
        .map(|i| Point::from_fn(p.dim, |j| if j < i { leg } else { 0.0 }))
        .collect()
}

/// Value of `f + lambda ||x||_1` at the composite saddle with `legs` leg
/// coordinates.
pub fn composite_saddle_value(p: &OctopusParams, lambda: f64, legs: usize) -> f64 {
    let per_leg = 4.0 * p.tau * lambda - lambda * lambda / (4.0 * p.sharpness);
    -(legs as f64) * gluing_balance(p) + legs as f64 * per_leg
}

/// Minimizer and minimum value of `f + lambda ||x||_1`.
pub fn composite_minimum(p: &OctopusParams, lambda: f64) -> (Point, f64) {
    let leg = 4.0 * p.tau - lambda / (2.0 * p.sharpness);
    (
        Point::from_fn(p.dim, |_| leg),
        composite_saddle_value(p, lambda, p.dim),
    )
}

/// One octopus instance as a [`SmoothObjective`].
#[derive(Clone, Debug)]
pub struct Octopus {
    params: OctopusParams,
    constants: OctopusConstants,
}

impl Octopus {
    pub fn new(params: OctopusParams) -> Result<Self> {
        params.validate()?;
        Ok(Octopus {
            params,
            constants: octopus_constants(&params),
        })
    }

    pub fn params(&self) -> &OctopusParams {
        &self.params
    }

    pub fn constants(&self) -> OctopusConstants {
        self.constants
    }

    pub fn nu(&self) -> f64 {
        self.constants.nu
    }

    pub fn catalog(&self) -> OctopusCatalog {
        octopus_catalog(&self.params)
    }

    /// Region of `x` after folding into the first quadrant.
    pub fn region(&self, x: &[f64]) -> Result<OctopusRegion> {
        let y: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        octopus_region(&self.params, &y).map_err(|e| match e {
            Error::Domain { reason, .. } => domain_error(x, reason),
            other => other,
        })
    }

    /// A random point of the domain: a uniformly chosen region, uniform
    /// coordinates inside its box, and random signs.
    pub fn sample_domain<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let d = self.params.dim;
        let t = self.params.tau;
        let k = rng.random_range(0..=d);
        let glue = k < d && rng.random_bool(0.5);
        Point::from_fn(d, |j| {
            let (lo, hi) = if j < k {
                (2.0 * t, 6.0 * t)
            } else if j == k && glue {
                (t, 2.0 * t)
            } else {
                (0.0, t)
            };
            let v = rng.random_range(lo..=hi);
            if rng.random_bool(0.5) {
                -v
            } else {
                v
            }
        })
    }

    fn eval(&self, x: &[f64], order: usize) -> Result<(f64, Vec<f64>, Option<DMatrix<f64>>)> {
        let p = &self.params;
        let d = p.dim;
        let region = self.region(x)?;
        let y: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        let (l, g, t) = (p.sharpness, p.gamma, p.tau);
        let nu = self.constants.nu;
        let k = region.branch - 1;
        let legs = k.min(d);

        let mut value = -(legs as f64) * nu;
        let mut grad = vec![0.0; d];
        let mut hess = (order >= 2).then(|| DMatrix::zeros(d, d));

        for j in 0..legs {
            let dy = y[j] - 4.0 * t;
            value += l * dy * dy;
            grad[j] = 2.0 * l * dy;
            if let Some(h) = hess.as_mut() {
                h[(j, j)] = 2.0 * l;
            }
        }
        let mut quad_from = d;
        if k < d {
            match region.case {
                RegionCase::One => {
                    value -= g * y[k] * y[k];
                    grad[k] = -2.0 * g * y[k];
                    if let Some(h) = hess.as_mut() {
                        h[(k, k)] = -2.0 * g;
                    }
                    quad_from = k + 1;
                }
                RegionCase::Two if k + 1 < d => {
                    let g1 = g1_all(p, y[k]);
                    let g2 = g2_all(p, y[k]);
                    let z = y[k + 1];
                    value += g1[0] + g2[0] * z * z;
                    grad[k] = g1[1] + g2[1] * z * z;
                    grad[k + 1] = 2.0 * g2[0] * z;
                    if let Some(h) = hess.as_mut() {
                        h[(k, k)] = g1[2] + g2[2] * z * z;
                        h[(k, k + 1)] = 2.0 * g2[1] * z;
                        h[(k + 1, k)] = 2.0 * g2[1] * z;
                        h[(k + 1, k + 1)] = 2.0 * g2[0];
                    }
                    quad_from = k + 2;
                }
                RegionCase::Two => {
                    let g1 = g1_all(p, y[k]);
                    value += g1[0];
                    grad[k] = g1[1];
                    if let Some(h) = hess.as_mut() {
                        h[(k, k)] = g1[2];
                    }
                }
            }
        }
        for j in quad_from..d {
            value += l * y[j] * y[j];
            grad[j] = 2.0 * l * y[j];
            if let Some(h) = hess.as_mut() {
                h[(j, j)] = 2.0 * l;
            }
        }

        // even reflection; at y_j = 0 every case formula has zero slope
        let sign: Vec<f64> = x.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();
        for j in 0..d {
            grad[j] *= sign[j];
        }
        if let Some(h) = hess.as_mut() {
            for i in 0..d {
                for j in 0..d {
                    h[(i, j)] *= sign[i] * sign[j];
                }
            }
        }
        Ok((value, grad, hess))
    }

    fn check(&self, x: &Point) -> Result<()> {
        if x.dim() != self.params.dim {
            return Err(Error::Dimension {
                expected: self.params.dim,
                got: x.dim(),
            });
        }
        Ok(())
    }
}

impl SmoothObjective for Octopus {
    fn dim(&self) -> usize {
        self.params.dim
    }

    fn value(&self, x: &Point) -> Result<f64> {
        self.check(x)?;
        self.eval(x, 0).map(|r| r.0)
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        self.check(x)?;
        self.eval(x, 1).map(|r| Point::from_vec_unchecked(r.1))
    }

    fn hessian(&self, x: &Point) -> Result<Option<DMatrix<f64>>> {
        self.check(x)?;
        self.eval(x, 2).map(|r| r.2)
    }

    fn grad_lipschitz(&self) -> f64 {
        self.constants.ell
    }

    fn hessian_lipschitz(&self) -> f64 {
        self.constants.rho
    }

    fn name(&self) -> String {
        format!("octopus(d={})", self.params.dim)
    }
}
