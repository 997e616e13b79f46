use std::fmt;

use crate::error::Error;
use crate::objective::Point;

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Termination {
    /// The escape window closed without sufficient decrease; the anchor point
    /// was returned.
    PpdCertified,
    MaxIter,
    GmBelowTol,
    AbortedNonfinite,
    /// An iterate left the objective's domain.
    AbortedDomain,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::PpdCertified => "ppd_certified",
            Termination::MaxIter => "max_iter",
            Termination::GmBelowTol => "gm_below_tol",
            Termination::AbortedNonfinite => "aborted_nonfinite",
            Termination::AbortedDomain => "aborted_domain",
        }
    }

    pub fn is_abort(&self) -> bool {
        matches!(
            self,
            Termination::AbortedNonfinite | Termination::AbortedDomain
        )
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub phi: f64,
    pub gm_norm: f64,
    /// A perturbation was injected at this iteration; `phi` and `gm_norm`
    /// refer to the perturbed iterate.
    pub perturbed: bool,
    /// The iteration lies inside an escape window.
    pub in_window: bool,
    pub point: Option<Point>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationEvent {
    pub iteration: usize,
    /// The iterate before the noise was added.
    pub anchor: Point,
    pub noise: Point,
}

/// Whether trace rows keep the full iterate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StorePoints {
    /// Keep points when `d <= 32`.
    #[default]
    Auto,
    Always,
    Never,
}

impl StorePoints {
    pub(crate) fn keep(self, dim: usize) -> bool {
        match self {
            StorePoints::Auto => dim <= 32,
            StorePoints::Always => true,
            StorePoints::Never => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub method: String,
    pub final_point: Point,
    pub final_phi: f64,
    /// Steps taken.
    pub iterations: usize,
    pub termination: Termination,
    pub trace: Vec<TraceRecord>,
    pub perturbations: Vec<PerturbationEvent>,
    /// The evaluation error behind an aborted run, tagged with its iteration.
    pub abort: Option<Error>,
}

impl RunReport {
    /// Lowest `phi` seen among the first `n + 1` trace rows.
    pub fn best_phi_within(&self, n: usize) -> f64 {
        self.trace
            .iter()
            .take_while(|r| r.iter <= n)
            .map(|r| r.phi)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Collects trace rows for one run.
pub(crate) struct Recorder {
    keep_points: bool,
    pub(crate) trace: Vec<TraceRecord>,
    pub(crate) perturbations: Vec<PerturbationEvent>,
}

impl Recorder {
    pub(crate) fn new(dim: usize, store: StorePoints) -> Self {
        Recorder {
            keep_points: store.keep(dim),
            trace: Vec::new(),
            perturbations: Vec::new(),
        }
    }

    pub(crate) fn push(
        &mut self,
        iter: usize,
        phi: f64,
        gm_norm: f64,
        perturbed: bool,
        in_window: bool,
        x: &Point,
    ) {
        self.trace.push(TraceRecord {
            iter,
            phi,
            gm_norm,
            perturbed,
            in_window,
            point: self.keep_points.then(|| x.clone()),
        });
    }
}

/// Abort classification for an evaluation error.
pub(crate) fn abort_kind(e: &Error) -> Termination {
    match e {
        Error::Domain { .. } => Termination::AbortedDomain,
        Error::AtIteration { source, .. } => abort_kind(source),
        _ => Termination::AbortedNonfinite,
    }
}
