use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::objective::Point;

/// Default step for gradient differences.
pub const FD_GRAD_STEP: f64 = 1e-5;
/// Default step for Hessian differences.
pub const FD_HESS_STEP: f64 = 1e-4;

fn check_h(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("difference step must be positive, got {h}")))
    }
}

/// Central differences `(f(x + h e_j) - f(x - h e_j)) / (2h)`.
pub fn fd_gradient<F>(f: F, x: &Point, h: f64) -> Result<Point>
where
    F: Fn(&Point) -> Result<f64>,
{
    check_h(h)?;
    let mut g = Vec::with_capacity(x.dim());
    for j in 0..x.dim() {
        g.push((f(&x.shifted(j, h))? - f(&x.shifted(j, -h))?) / (2.0 * h));
    }
    Ok(Point::from_vec_unchecked(g))
}

/// Richardson-extrapolated central differences, `(4 D(h/2) - D(h)) / 3`.
pub fn fd_gradient_richardson<F>(f: F, x: &Point, h: f64) -> Result<Point>
where
    F: Fn(&Point) -> Result<f64>,
{
    let coarse = fd_gradient(&f, x, h)?;
    let fine = fd_gradient(&f, x, h / 2.0)?;
    Ok(fine.scale(4.0 / 3.0).axpy(-1.0 / 3.0, &coarse))
}

/// Second-order central differences of `f`, symmetrized.
pub fn fd_hessian<F>(f: F, x: &Point, h: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&Point) -> Result<f64>,
{
    check_h(h)?;
    let d = x.dim();
    let f0 = f(x)?;
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        let xp = x.shifted(i, h);
        let xm = x.shifted(i, -h);
        m[(i, i)] = (f(&xp)? - 2.0 * f0 + f(&xm)?) / (h * h);
        for j in (i + 1)..d {
            let pp = f(&xp.shifted(j, h))?;
            let pm = f(&xp.shifted(j, -h))?;
            let mp = f(&xm.shifted(j, h))?;
            let mm = f(&xm.shifted(j, -h))?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

/// Hessian from central differences of an analytic gradient, symmetrized.
pub fn fd_hessian_from_gradient<G>(grad: G, x: &Point, h: f64) -> Result<DMatrix<f64>>
where
    G: Fn(&Point) -> Result<Point>,
{
    check_h(h)?;
    let d = x.dim();
    let mut m = DMatrix::zeros(d, d);
    for j in 0..d {
        let gp = grad(&x.shifted(j, h))?;
        let gm = grad(&x.shifted(j, -h))?;
        for i in 0..d {
            m[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    Ok((&m + m.transpose()) * 0.5)
}
