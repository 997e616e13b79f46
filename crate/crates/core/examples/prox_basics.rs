//! Soft thresholding, the prox displacement and one forward-backward step.

use std::sync::Arc;

use ppd::benchmarks::Quadratic;
use ppd::prox::{gradient_mapping, prox_displacement, prox_step, soft_threshold};
use ppd::{CompositeObjective, Point};

fn main() -> ppd::Result<()> {
    let y = Point::new(vec![2.0, -0.3, 0.5, -1.5])?;
    let theta = 0.5;
    println!("y                 = {y:?}");
    println!("soft_threshold    = {:?}", soft_threshold(&y, theta)?);
    println!("prox_displacement = {:?}", prox_displacement(&y, theta)?);

    // f = (x1^2 + 4 x2^2) / 2 with 0.2 ||x||_1
    let obj = CompositeObjective::new(Arc::new(Quadratic::diagonal(vec![1.0, 4.0])), 0.2)?;
    let mut x = Point::new(vec![1.0, -1.0])?;
    let eta = 0.2;
    for t in 0..40 {
        let step = prox_step(&obj, &x, eta)?;
        if t % 5 == 0 || step.gm_norm == 0.0 {
            println!(
                "t={t} x={:?} phi={:.6} ||G||={:.3e}",
                x.as_slice(),
                obj.eval_phi(&x)?,
                step.gm_norm
            );
        }
        if step.gm_norm == 0.0 {
            break;
        }
        x = step.next;
    }
    println!("G at the fixed point: {:?}", gradient_mapping(&obj, &x, eta)?);
    Ok(())
}
