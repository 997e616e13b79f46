//! PPD against PD, GD and PGD on the octopus, several seeds per dimension.

use ppd::cli::experiments::{cell_seed, compare_cell, OctopusExperiment, COMPARE_LAMBDA};
use ppd::optimizers::Method;

fn main() -> ppd::Result<()> {
    let seeds = 5;
    for d in [2, 5, 10, 20] {
        let exp = OctopusExperiment::canonical(d, COMPARE_LAMBDA)?;
        print!("d={d:>2}");
        for m in Method::ALL {
            let mut gap = 0.0;
            for k in 0..seeds {
                let r = compare_cell(&exp, m, cell_seed(0, &[d as u64, k]))?;
                gap += exp.relative_gap(r.final_phi) / seeds as f64;
            }
            print!("  {}: {gap:.3}", m.as_str());
        }
        println!();
    }
    println!("(mean gap to the composite minimum, relative to d nu)");
    Ok(())
}
