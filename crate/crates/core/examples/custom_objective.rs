//! PPD on a user-supplied objective built from closures.

use std::sync::Arc;

use nalgebra::DMatrix;

use ppd::analysis::classify_point;
use ppd::optimizers::{make_ppd_params, run_ppd, seeded_rng};
use ppd::{CompositeObjective, FnObjective, Point};

fn main() -> ppd::Result<()> {
    // f(x, y) = x^4 / 4 - x^2 / 2 + y^2 / 2: strict saddle at the origin,
    // minima at (+-1, 0)
    let f = FnObjective::new(
        2,
        |p: &Point| p[0].powi(4) / 4.0 - p[0] * p[0] / 2.0 + p[1] * p[1] / 2.0,
        |p: &Point| Point::from_fn(2, |i| if i == 0 { p[0].powi(3) - p[0] } else { p[1] }),
        // declared on |x| <= 1.5
        5.75,
        9.0,
    )
    .with_hessian(|p: &Point| DMatrix::from_row_slice(2, 2, &[3.0 * p[0] * p[0] - 1.0, 0.0, 0.0, 1.0]))
    .named("double well");
    let obj = CompositeObjective::new(Arc::new(f), 0.0)?;
    let x0 = Point::zeros(2);
    let params = make_ppd_params(5.75, 9.0, 1e-3, 0.5, 0.1, 0.25, 2)?;
    let report = run_ppd(&obj, &x0, &params, params.default_max_iter(), &mut seeded_rng(3))?;
    let v = classify_point(&obj, &report.final_point, params.eps, params.rho, params.eta)?;
    println!(
        "{} after {} iterations at {:?}: {}",
        report.termination.as_str(),
        report.iterations,
        report.final_point.as_slice(),
        v.verdict
    );
    Ok(())
}
