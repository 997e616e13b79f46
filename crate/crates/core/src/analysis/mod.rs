//! Finite differences, Hessian eigenvalues, second-order stationarity
//! classification, Lipschitz audits and proof-scale diagnostics.

mod classify;
mod fd;
mod lipschitz;
mod units;

pub use classify::{
    classify_point, classify_point_with_margin, min_eigenvalue, StationarityVerdict, Verdict,
    MAX_CLASSIFY_DIM,
};
pub use fd::{
    fd_gradient, fd_gradient_richardson, fd_hessian, fd_hessian_from_gradient, FD_GRAD_STEP,
    FD_HESS_STEP,
};
pub use lipschitz::{lipschitz_audit, LipschitzAudit};
pub use units::{
    hat_c_root, lambda_bound_diagnostic, proof_units, LambdaBoundOptions, LambdaBoundReport,
    ProofUnits,
};
