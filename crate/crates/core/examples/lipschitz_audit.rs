//! Sampled curvature constants against the declared ones.

use rand::Rng;

use ppd::analysis::lipschitz_audit;
use ppd::benchmarks::{GaussianBump, Octopus, OctopusParams};
use ppd::optimizers::seeded_rng;
use ppd::{Point, SmoothObjective};

fn main() -> ppd::Result<()> {
    for d in [2, 4, 8] {
        let oct = Octopus::new(OctopusParams::canonical(d))?;
        let mut rng = seeded_rng(d as u64);
        let a = lipschitz_audit(&oct, || oct.sample_domain(&mut rng), 5000);
        println!(
            "octopus d={d}: ell_hat {:.3} <= {:.3}, rho_hat {:.3} <= {:.3} ({} pairs)",
            a.ell_hat,
            oct.grad_lipschitz(),
            a.rho_hat,
            oct.hessian_lipschitz(),
            a.pairs_used
        );
    }
    let bump = GaussianBump::smooth_part();
    let mut rng = seeded_rng(0);
    let a = lipschitz_audit(
        &bump,
        || Point::from_fn(2, |_| rng.random_range(-4.0..4.0)),
        5000,
    );
    println!(
        "bump: ell_hat {:.4} <= {:.4}, rho_hat {:.4} <= {:.4}",
        a.ell_hat,
        bump.grad_lipschitz(),
        a.rho_hat,
        bump.hessian_lipschitz()
    );
    Ok(())
}
