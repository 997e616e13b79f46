//! Perturbed proximal descent walking down the legs of the octopus.
//!
//! Usage: `cargo run --release --example octopus_escape -- [dim] [seed]`

use ppd::cli::experiments::{run_with_params, OctopusExperiment, COMPARE_LAMBDA};
use ppd::optimizers::{Method, StorePoints};

fn main() -> ppd::Result<()> {
    let mut args = std::env::args().skip(1);
    let dim: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);

    let exp = OctopusExperiment::canonical(dim, COMPARE_LAMBDA)?;
    let params = exp.compare_params()?;
    println!(
        "d={dim} nu={:.3} ell={:.3} rho={:.3} eta={:.4} t_thres={} g_thres={:.2e}",
        exp.octopus.nu(),
        params.ell,
        params.rho,
        params.eta,
        params.t_thres,
        params.g_thres
    );
    let report = run_with_params(&exp.obj, &exp.x0, Method::Ppd, &params, 5000, seed, StorePoints::Always)?;
    for ev in &report.perturbations {
        let legs = ev.anchor.iter().filter(|v| v.abs() > 2.0 * exp.octopus.params().tau).count();
        println!(
            "kick at t={:4}: anchor on {legs} leg(s), |noise|={:.3}",
            ev.iteration,
            ev.noise.norm()
        );
    }
    println!(
        "{} after {} iterations: phi={:.4}, composite minimum {:.4}, relative gap {:.2e}",
        report.termination.as_str(),
        report.iterations,
        report.final_phi,
        exp.min_value,
        exp.relative_gap(report.final_phi)
    );
    Ok(())
}
