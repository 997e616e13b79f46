//! Perturbed proximal descent for `phi(x) = f(x) + lambda * ||x||_1` with `f`
//! smooth and nonconvex, plus strict-saddle benchmarks, baseline optimizers and
//! second-order stationarity analysis.

pub mod analysis;
pub mod benchmarks;
pub mod cli;
pub mod error;
pub mod objective;
pub mod optimizers;
pub mod prox;

pub use error::{Error, Result};
pub use objective::{CompositeObjective, FnObjective, Penalty, Point, SmoothObjective};
