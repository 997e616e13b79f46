use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::objective::{Point, SmoothObjective};

fn check(dim: usize, x: &Point) -> Result<()> {
    if x.dim() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: x.dim(),
        });
    }
    Ok(())
}

/// `f(x) = 0.5 * sum_i a_i x_i^2`.
///
/// The Hessian is constant, so any positive number bounds its Lipschitz
/// constant; `1.0` is declared unless overridden.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic {
    diag: Vec<f64>,
    rho: f64,
}

impl Quadratic {
    pub fn identity(dim: usize) -> Self {
        Quadratic::diagonal(vec![1.0; dim])
    }

    pub fn diagonal(diag: Vec<f64>) -> Self {
        Quadratic { diag, rho: 1.0 }
    }

    pub fn with_declared_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }
}

impl SmoothObjective for Quadratic {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn value(&self, x: &Point) -> Result<f64> {
        check(self.dim(), x)?;
        Ok(0.5 * x.iter().zip(&self.diag).map(|(v, a)| a * v * v).sum::<f64>())
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        check(self.dim(), x)?;
        Ok(Point::from_fn(self.dim(), |i| self.diag[i] * x[i]))
    }

    fn hessian(&self, x: &Point) -> Result<Option<DMatrix<f64>>> {
        check(self.dim(), x)?;
        Ok(Some(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diag))))
    }

    fn grad_lipschitz(&self) -> f64 {
        let m = self.diag.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if m > 0.0 {
            m
        } else {
            1.0
        }
    }

    fn hessian_lipschitz(&self) -> f64 {
        self.rho
    }

    fn name(&self) -> String {
        "quadratic".to_string()
    }
}

/// `f = 0`, so that `phi` is the bare l1 norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zero {
    dim: usize,
}

impl Zero {
    pub fn new(dim: usize) -> Self {
        Zero { dim }
    }
}

impl SmoothObjective for Zero {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Point) -> Result<f64> {
        check(self.dim, x)?;
        Ok(0.0)
    }

    fn gradient(&self, x: &Point) -> Result<Point> {
        check(self.dim, x)?;
        Ok(Point::zeros(self.dim))
    }

    fn hessian(&self, x: &Point) -> Result<Option<DMatrix<f64>>> {
        check(self.dim, x)?;
        Ok(Some(DMatrix::zeros(self.dim, self.dim)))
    }

    fn grad_lipschitz(&self) -> f64 {
        1.0
    }

    fn hessian_lipschitz(&self) -> f64 {
        1.0
    }

    fn name(&self) -> String {
        "zero".to_string()
    }
}
