//! Two-dimensional Gaussian bump with a small Huber term:
//! `phi(x, y) = 0.5 (x^2 - y^2) exp(-(x^2 + y^2) / 5) + H_100(x, y) / 100`.
//!
//! The origin is a strict saddle and the two local minimizers lie near
//! `(0, +-sqrt 5)`. The Huber term is either folded into `f` (for plain
//! gradient descent) or kept as the nonsmooth part and handled by its prox.

use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;

use super::huber::{huber_gradient, huber_value};
use super::sym2_spectral_norm;
use crate::error::{Error, Result};
use crate::objective::{CompositeObjective, Point, SmoothObjective};

pub const BUMP_HUBER_WEIGHT: f64 = 0.01;
pub const BUMP_HUBER_MU: f64 = 100.0;

/// Value, gradient and Hessian of the smooth bump without the Huber term.
fn bump_parts(x: f64, y: f64) -> (f64, [f64; 2], [f64; 3]) {
    let e = (-(x * x + y * y) / 5.0).exp();
    let q = 0.5 * (x * x - y * y);
    let gx = e * x * (1.0 - 0.4 * q);
    let gy = -e * y * (1.0 + 0.4 * q);
    let hxx = e * ((1.0 - 0.4 * q) * (1.0 - 0.4 * x * x) - 0.4 * x * x);
    let hyy = -e * ((1.0 + 0.4 * q) * (1.0 - 0.4 * y * y) - 0.4 * y * y);
    let hxy = 0.16 * e * x * y * q;
    (q * e, [gx, gy], [hxx, hxy, hyy])
}

/// The bump as a [`SmoothObjective`], with or without the Huber term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianBump {
    include_huber: bool,
}

impl GaussianBump {
    /// `f` = bump + Huber term, for gradient descent.
    pub fn with_huber() -> Self {
        GaussianBump {
            include_huber: true,
        }
    }

    /// `f` = bump only; pair with [`bump_prox_objective`].
    pub fn smooth_part() -> Self {
        GaussianBump {
            include_huber: false,
        }
    }

    fn check(x: &Point) -> Result<()> {
        if x.dim() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: x.dim(),
            });
        }
        Ok(())
    }
}

impl SmoothObjective for GaussianBump {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, x: &Point) -> Result<f64> {
        Self::check(x)?;
        let (v, _, _) = bump_parts(x[0], x[1]);
        Ok(if self.include_huber {
            v + BUMP_HUBER_WEIGHT * huber_value(BUMP_HUBER_MU, x)
        } else {
            v
        })
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        Self::check(x)?;
        let (_, g, _) = bump_parts(x[0], x[1]);
        let g = Point::from_vec_unchecked(g.to_vec());
        Ok(if self.include_huber {
            g.axpy(BUMP_HUBER_WEIGHT, &huber_gradient(BUMP_HUBER_MU, x))
        } else {
            g
        })
    }

    fn hessian(&self, x: &Point) -> Result<Option<DMatrix<f64>>> {
        Self::check(x)?;
        let (_, _, [hxx, hxy, hyy]) = bump_parts(x[0], x[1]);
        let mut h = DMatrix::from_row_slice(2, 2, &[hxx, hxy, hxy, hyy]);
        if self.include_huber {
            let n = x.norm();
            if n <= BUMP_HUBER_MU {
                h += DMatrix::identity(2, 2) * (BUMP_HUBER_WEIGHT / BUMP_HUBER_MU);
            } else {
                let u = nalgebra::DVector::from_column_slice(x.as_slice()) / n;
                h += (DMatrix::identity(2, 2) - &u * u.transpose()) * (BUMP_HUBER_WEIGHT / n);
            }
        }
        Ok(Some(h))
    }

    fn grad_lipschitz(&self) -> f64 {
        let c = bump_constants();
        if self.include_huber {
            c.0 + BUMP_HUBER_WEIGHT / BUMP_HUBER_MU
        } else {
            c.0
        }
    }

    fn hessian_lipschitz(&self) -> f64 {
        bump_constants().1
    }

    fn name(&self) -> String {
        "gaussian_bump".to_string()
    }
}

/// `(value, gradient)` of the full objective, Huber term included.
pub fn gaussian_bump(x: &Point) -> Result<(f64, Point)> {
    let f = GaussianBump::with_huber();
    Ok((f.value(x)?, f.gradient(x)?))
}

/// Composite objective with the whole Huber term as the smooth part's
/// companion: `f` = bump, `g` = Huber, `lambda` unused.
pub fn bump_prox_objective() -> CompositeObjective {
    CompositeObjective::with_huber(
        Arc::new(GaussianBump::smooth_part()),
        BUMP_HUBER_WEIGHT,
        BUMP_HUBER_MU,
    )
    .expect("constant huber parameters are valid")
}

/// Composite objective with the Huber term inside `f` and no penalty.
pub fn bump_gd_objective() -> CompositeObjective {
    CompositeObjective::new(Arc::new(GaussianBump::with_huber()), 0.0)
        .expect("zero penalty is valid")
}

/// Declared `(ell, rho)` of the bump part: the maximum Hessian spectral norm
/// and a finite-difference estimate of the third-derivative norm over
/// `[-10, 10]^2`, each inflated by 1%.
fn bump_constants() -> (f64, f64) {
    static CONSTANTS: OnceLock<(f64, f64)> = OnceLock::new();
    *CONSTANTS.get_or_init(|| {
        const N: i32 = 200;
        let h = 1e-4;
        let dirs: Vec<(f64, f64)> = (0..8)
            .map(|k| (k as f64 * std::f64::consts::PI / 8.0).sin_cos())
            .collect();
        let (mut ell, mut rho) = (0.0f64, 0.0f64);
        for i in -N..=N {
            for j in -N..=N {
                let (x, y) = (i as f64 * 0.05, j as f64 * 0.05);
                let (_, _, a) = bump_parts(x, y);
                ell = ell.max(sym2_spectral_norm(a[0], a[1], a[2]));
                for &(s, c) in &dirs {
                    let (_, _, b) = bump_parts(x + h * c, y + h * s);
                    let n = sym2_spectral_norm(b[0] - a[0], b[1] - a[1], b[2] - a[2]);
                    rho = rho.max(n / h);
                }
            }
        }
        (ell * 1.01, rho * 1.01)
    })
}

/// The two local minimizers of the full objective, located by grid search over
/// `[-5, 5]^2` at resolution `1e-3` (coarse pass, then a fine pass around the
/// coarse winner in each half plane).
pub fn bump_minimizers() -> [Point; 2] {
    static MINIMIZERS: OnceLock<[Point; 2]> = OnceLock::new();
    MINIMIZERS
        .get_or_init(|| {
            let f = GaussianBump::with_huber();
            let eval = |x: f64, y: f64| {
                f.value(&Point::from_vec_unchecked(vec![x, y]))
                    .expect("dimension is two")
            };
            let search = |y_lo: f64, y_hi: f64| {
                let mut best = (f64::INFINITY, 0.0, 0.0);
                let coarse = 0.01;
                let n = (10.0 / coarse) as i32;
                for i in 0..=n {
                    let x = -5.0 + i as f64 * coarse;
                    let m = ((y_hi - y_lo) / coarse).round() as i32;
                    for j in 0..=m {
                        let y = y_lo + j as f64 * coarse;
                        let v = eval(x, y);
                        if v < best.0 {
                            best = (v, x, y);
                        }
                    }
                }
                let fine = 1e-3;
                let (cx, cy) = (best.1, best.2);
                for i in -20..=20 {
                    for j in -20..=20 {
                        let x = cx + i as f64 * fine;
                        let y = cy + j as f64 * fine;
                        let v = eval(x, y);
                        if v < best.0 {
                            best = (v, x, y);
                        }
                    }
                }
                Point::from_vec_unchecked(vec![best.1, best.2])
            };
            [search(0.0, 5.0), search(-5.0, 0.0)]
        })
        .clone()
}

/// Distance from `x` to the nearest bump minimizer.
pub fn bump_minimizer_distance(x: &Point) -> f64 {
    let [a, b] = bump_minimizers();
    x.distance(&a).min(x.distance(&b))
}
