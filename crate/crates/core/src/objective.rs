//! Points, the smooth-objective contract, and the composite objective
//! `phi(x) = f(x) + lambda * ||x||_1`.

use std::fmt;
use std::ops::{Deref, Index};
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A dense point in `R^d`, `d >= 1`, with finite coordinates.
#[derive(Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    /// Validating constructor: rejects empty or non-finite input.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("a point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                what: "coordinate",
                point: coords,
            });
        }
        Ok(Point(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> f64) -> Self {
        Point((0..dim).map(f).collect())
    }

    /// Skips the finiteness check. Callers that can produce non-finite values
    /// must test [`Point::is_finite`] before handing the point on.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn norm_l1(&self) -> f64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// `self + alpha * other`
    pub fn axpy(&self, alpha: f64, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Point) -> Point {
        self.axpy(-1.0, other)
    }

    pub fn add(&self, other: &Point) -> Point {
        self.axpy(1.0, other)
    }

    pub fn scale(&self, alpha: f64) -> Point {
        Point(self.0.iter().map(|c| alpha * c).collect())
    }

    pub fn map(&self, f: impl FnMut(f64) -> f64) -> Point {
        Point(self.0.iter().copied().map(f).collect())
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Coordinate `i` moved by `h`.
    pub fn shifted(&self, i: usize, h: f64) -> Point {
        let mut v = self.0.clone();
        v[i] += h;
        Point(v)
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Contract for the smooth (possibly nonconvex) part `f`.
///
/// `grad_lipschitz` and `hessian_lipschitz` are declared, not certified; use
/// [`crate::analysis::lipschitz_audit`] to check a declaration against samples.
pub trait SmoothObjective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &Point) -> Result<f64>;

    fn gradient(&self, x: &Point) -> Result<Point>;

    /// Analytic Hessian if the objective provides one.
    fn hessian(&self, _x: &Point) -> Result<Option<DMatrix<f64>>> {
        Ok(None)
    }

    /// Declared gradient Lipschitz constant.
    fn grad_lipschitz(&self) -> f64;

    /// Declared Hessian Lipschitz constant.
    fn hessian_lipschitz(&self) -> f64;

    fn name(&self) -> String {
        "smooth".to_string()
    }
}

/// Nonsmooth term `g` of the composite objective.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Penalty {
    /// `lambda * ||x||_1`
    L1 { lambda: f64 },
    /// `weight * H_mu(x)`, the norm-based Huber function. Only used by the
    /// two-dimensional bump experiment, where the Huber term is handled by its
    /// proximal operator instead of its gradient.
    Huber { weight: f64, mu: f64 },
}

impl Penalty {
    pub fn value(&self, x: &Point) -> f64 {
        match *self {
            Penalty::L1 { lambda } => {
                if lambda == 0.0 {
                    0.0
                } else {
                    lambda * x.norm_l1()
                }
            }
            Penalty::Huber { weight, mu } => weight * crate::benchmarks::huber_value(mu, x),
        }
    }
}

/// `phi = f + g` with `g` a [`Penalty`]; ordinarily `g = lambda * ||x||_1`.
#[derive(Clone)]
pub struct CompositeObjective {
    smooth: Arc<dyn SmoothObjective>,
    penalty: Penalty,
}

impl fmt::Debug for CompositeObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompositeObjective")
            .field("smooth", &self.smooth.name())
            .field("dim", &self.smooth.dim())
            .field("penalty", &self.penalty)
            .finish()
    }
}

impl CompositeObjective {
    pub fn new(smooth: Arc<dyn SmoothObjective>, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::invalid(format!(
                "l1 weight must be finite and nonnegative, got {lambda}"
            )));
        }
        Ok(CompositeObjective {
            smooth,
            penalty: Penalty::L1 { lambda },
        })
    }

    pub fn with_huber(smooth: Arc<dyn SmoothObjective>, weight: f64, mu: f64) -> Result<Self> {
        if !(weight >= 0.0) || !(mu > 0.0) || !weight.is_finite() || !mu.is_finite() {
            return Err(Error::invalid(format!(
                "huber penalty needs weight >= 0 and mu > 0, got weight={weight}, mu={mu}"
            )));
        }
        Ok(CompositeObjective {
            smooth,
            penalty: Penalty::Huber { weight, mu },
        })
    }

    pub fn smooth(&self) -> &dyn SmoothObjective {
        self.smooth.as_ref()
    }

    pub fn smooth_arc(&self) -> Arc<dyn SmoothObjective> {
        Arc::clone(&self.smooth)
    }

    pub fn penalty(&self) -> Penalty {
        self.penalty
    }

    /// The l1 weight; zero when the penalty is not an l1 term.
    pub fn lambda(&self) -> f64 {
        match self.penalty {
            Penalty::L1 { lambda } => lambda,
            Penalty::Huber { .. } => 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.smooth.dim()
    }

    pub(crate) fn check_dim(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// `phi(x) = f(x) + g(x)`.
    pub fn eval_phi(&self, x: &Point) -> Result<f64> {
        self.check_dim(x)?;
        let f = self.smooth.value(x)?;
        let phi = f + self.penalty.value(x);
        if !phi.is_finite() {
            return Err(Error::NonFinite {
                what: "objective value",
                point: x.to_vec(),
            });
        }
        Ok(phi)
    }

    /// Gradient of the smooth part.
    pub fn eval_grad_f(&self, x: &Point) -> Result<Point> {
        self.check_dim(x)?;
        let g = self.smooth.gradient(x)?;
        if g.dim() != x.dim() {
            return Err(Error::Dimension {
                expected: x.dim(),
                got: g.dim(),
            });
        }
        if !g.is_finite() {
            return Err(Error::NonFinite {
                what: "gradient",
                point: x.to_vec(),
            });
        }
        Ok(g)
    }

    pub fn eval_hessian_f(&self, x: &Point) -> Result<Option<DMatrix<f64>>> {
        self.check_dim(x)?;
        self.smooth.hessian(x)
    }
}

type ValueFn = dyn Fn(&Point) -> f64 + Send + Sync;
type GradFn = dyn Fn(&Point) -> Point + Send + Sync;
type HessFn = dyn Fn(&Point) -> DMatrix<f64> + Send + Sync;

/// A [`SmoothObjective`] assembled from closures.
pub struct FnObjective {
    dim: usize,
    value: Box<ValueFn>,
    gradient: Box<GradFn>,
    hessian: Option<Box<HessFn>>,
    ell: f64,
    rho: f64,
    name: String,
}

impl FnObjective {
    pub fn new(
        dim: usize,
        value: impl Fn(&Point) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&Point) -> Point + Send + Sync + 'static,
        ell: f64,
        rho: f64,
    ) -> Self {
        FnObjective {
            dim,
            value: Box::new(value),
            gradient: Box::new(gradient),
            hessian: None,
            ell,
            rho,
            name: "fn".to_string(),
        }
    }

    pub fn with_hessian(
        mut self,
        hessian: impl Fn(&Point) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        self.hessian = Some(Box::new(hessian));
        self
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl SmoothObjective for FnObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Point) -> Result<f64> {
        Ok((self.value)(x))
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        Ok((self.gradient)(x))
    }

    fn hessian(&self, x: &Point) -> Result<Option<DMatrix<f64>>> {
        Ok(self.hessian.as_ref().map(|h| h(x)))
    }

    fn grad_lipschitz(&self) -> f64 {
        self.ell
    }

    fn hessian_lipschitz(&self) -> f64 {
        self.rho
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{Quadratic, Zero};

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn point_rejects_nan_and_empty() {
        assert!(Point::new(vec![]).is_err());
        assert!(matches!(
            Point::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { .. })
        ));
        assert!(Point::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn phi_pure_l1() {
        let obj = CompositeObjective::new(Arc::new(Zero::new(2)), 1.0).unwrap();
        assert_eq!(obj.eval_phi(&pt(&[3.0, -4.0])).unwrap(), 7.0);
    }

    #[test]
    fn phi_quadratic_cases() {
        let q = Arc::new(Quadratic::identity(2));
        let plain = CompositeObjective::new(q.clone(), 0.0).unwrap();
        assert_eq!(plain.eval_phi(&pt(&[0.0, 0.0])).unwrap(), 0.0);
        let reg = CompositeObjective::new(q, 2.0).unwrap();
        assert_eq!(reg.eval_phi(&pt(&[1.0, -1.0])).unwrap(), 5.0);
    }

    #[test]
    fn zero_lambda_matches_smooth_exactly() {
        let q = Arc::new(Quadratic::identity(3));
        let obj = CompositeObjective::new(q.clone(), 0.0).unwrap();
        let x = pt(&[0.1, -0.7, 1e-3]);
        assert_eq!(obj.eval_phi(&x).unwrap(), q.value(&x).unwrap());
    }

    #[test]
    fn grad_delegates() {
        let obj = CompositeObjective::new(Arc::new(Quadratic::identity(2)), 0.3).unwrap();
        assert_eq!(obj.eval_grad_f(&pt(&[2.0, -3.0])).unwrap(), pt(&[2.0, -3.0]));
        let zero = CompositeObjective::new(Arc::new(Zero::new(2)), 0.3).unwrap();
        assert_eq!(zero.eval_grad_f(&pt(&[2.0, -3.0])).unwrap(), pt(&[0.0, 0.0]));
    }

    #[test]
    fn negative_lambda_rejected() {
        assert!(CompositeObjective::new(Arc::new(Zero::new(1)), -0.1).is_err());
        assert!(CompositeObjective::new(Arc::new(Zero::new(1)), f64::NAN).is_err());
    }

    #[test]
    fn dimension_mismatch_reported() {
        let obj = CompositeObjective::new(Arc::new(Zero::new(2)), 1.0).unwrap();
        assert_eq!(
            obj.eval_phi(&pt(&[1.0])),
            Err(Error::Dimension {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn nonfinite_smooth_value_is_an_error() {
        let bad = FnObjective::new(1, |_| f64::NAN, |x| x.clone(), 1.0, 1.0);
        let obj = CompositeObjective::new(Arc::new(bad), 0.0).unwrap();
        match obj.eval_phi(&pt(&[0.5])) {
            Err(Error::NonFinite { point, .. }) => assert_eq!(point, vec![0.5]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
