//! Scale units of the escape analysis and the heuristic l1 bounds.

use ppd::analysis::{lambda_bound_diagnostic, proof_units, LambdaBoundOptions};
use ppd::cli::experiments::OctopusExperiment;

fn main() -> ppd::Result<()> {
    for (c, d) in [(0.5, 2), (0.5, 10), (3.0, 2)] {
        let exp = OctopusExperiment::canonical(d, 0.01)?;
        let eta = c / exp.ell();
        let gamma = 2.0 * exp.octopus.params().gamma;
        let u = proof_units(eta, exp.ell(), exp.rho(), gamma, 0.1, d)?;
        let r = lambda_bound_diagnostic(&u, 0.01, LambdaBoundOptions::default());
        println!(
            "c={c} d={d}: F={:.3e} G={:.3e} S={:.3e} T={:.1} bound1={:.3e} bound2={:.3e} ok={}{}",
            u.script_f,
            u.script_g,
            u.script_s,
            u.script_t,
            r.bound1,
            r.bound2,
            r.lambda_ok,
            if r.degenerate { " (degenerate: eta ell >= 1)" } else { "" }
        );
    }
    Ok(())
}
