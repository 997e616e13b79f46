//! Success rate on the Gaussian bump against stepsize for GD and Prox.
//!
//! Usage: `cargo run --release --example stepsize_sweep -- [trials]`

use ppd::cli::experiments::{largest_stable_eta, log_grid, sweep_rates, SWEEP_MAX_ITER};
use ppd::optimizers::Method;

fn main() -> ppd::Result<()> {
    let trials: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(50);
    let grid = log_grid(1e-3, 3.0, 16);
    let gd = sweep_rates(Method::Gd, &grid, trials, 0, SWEEP_MAX_ITER)?;
    let pd = sweep_rates(Method::Pd, &grid, trials, 0, SWEEP_MAX_ITER)?;
    println!("{:>10} {:>6} {:>6}", "eta", "GD", "Prox");
    for ((eta, g), p) in grid.iter().zip(&gd).zip(&pd) {
        println!("{eta:>10.4} {g:>6.2} {p:>6.2}");
    }
    println!(
        "largest eta with rate >= 0.9: GD {:?}, Prox {:?}",
        largest_stable_eta(&grid, &gd, 0.9),
        largest_stable_eta(&grid, &pd, 0.9)
    );
    Ok(())
}
