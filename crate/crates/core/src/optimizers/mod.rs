//! Perturbed proximal descent and the GD, PGD and PD baselines.

mod first_order;
mod params;
mod ppd;
mod report;

pub use first_order::{
    run_first_order, run_first_order_with, FirstOrderConfig, Method, Perturbation,
};
pub use params::{make_ppd_params, PpdParams, MAX_ITER_CAP};
pub use ppd::{run_ppd, run_ppd_traced, sample_ball};
pub use report::{
    PerturbationEvent, RunReport, StorePoints, Termination, TraceRecord,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random source used throughout: ChaCha8 seeded from a `u64`.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}
