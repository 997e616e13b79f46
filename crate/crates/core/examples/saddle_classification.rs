//! Second-order stationarity verdicts at the octopus saddles and minimum.

use ppd::analysis::{classify_point_with_margin, Verdict};
use ppd::benchmarks::{composite_minimum, composite_saddles};
use ppd::cli::experiments::OctopusExperiment;
use ppd::SmoothObjective;

fn main() -> ppd::Result<()> {
    let lambda = 0.01;
    let eps = 0.01;
    let exp = OctopusExperiment::canonical(4, lambda)?;
    let p = *exp.octopus.params();
    let (rho, eta) = (exp.rho(), 1.0 / exp.ell());
    let margin = Some(p.gamma);

    let (min, _) = composite_minimum(&p, lambda);
    let mut points = composite_saddles(&p, lambda);
    points.push(min);
    for x in &points {
        let v = classify_point_with_margin(&exp.obj, x, eps, rho, eta, margin)?;
        println!(
            "{:<16} ||G||={:.1e} min_eig={:+.4} at {:?}",
            v.verdict.as_str(),
            v.gm_norm,
            v.min_eig,
            x.as_slice()
        );
        debug_assert!(v.verdict != Verdict::NonStationary);
    }
    println!("curvature threshold -sqrt(rho eps) = {:.4}", -(rho * eps).sqrt());
    println!("declared ell = {:.4}", exp.octopus.grad_lipschitz());
    Ok(())
}
