//! Benchmark objectives: the octopus family, the Gaussian bump toy problem,
//! the Huber function, and convex sanity objectives.

mod bump;
mod huber;
mod octopus;
mod simple;

pub use bump::{
    bump_gd_objective, bump_minimizer_distance, bump_minimizers, bump_prox_objective,
    gaussian_bump, GaussianBump, BUMP_HUBER_MU, BUMP_HUBER_WEIGHT,
};
pub use huber::{huber_gradient, huber_prox, huber_value, Huber, HuberKind};
pub use octopus::{
    composite_minimum, composite_saddle_value, composite_saddles, gluing_balance,
    gluing_balance_from_g1, gluing_g1, gluing_g2, octopus_catalog, octopus_constants,
    octopus_region, GluingForm, Octopus, OctopusCatalog, OctopusConstants, OctopusParams,
    OctopusRegion, RegionCase,
};
pub use simple::{Quadratic, Zero};

/// Spectral norm of the symmetric matrix `[[a, b], [b, c]]`.
pub(crate) fn sym2_spectral_norm(a: f64, b: f64, c: f64) -> f64 {
    let m = 0.5 * (a + c);
    let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    m.abs() + r
}
