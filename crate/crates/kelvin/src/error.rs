//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by field evaluation, material validation, and the
/// numerical derivation pipeline.
#[derive(Debug, Clone, Error)]
pub enum KelvinError {
    /// Evaluation requested at the load application point, where every
    /// field of the Kelvin state is singular.
    #[error(
        "evaluation at the load application point (rho = {rho:.3e}); fields are singular there"
    )]
    SingularPoint { rho: f64 },

    /// Material parameter out of the admissible range.
    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    /// An angular ODE solve failed to meet its matching/regularity target.
    #[error("{step} did not converge: final defect {defect:.3e}")]
    NonConvergence { step: &'static str, defect: f64 },

    /// A quadrature produced a non-finite value or failed to refine.
    #[error("quadrature failure in {context}")]
    QuadratureFailure { context: &'static str },

    /// Axis evaluation of the sigma2/sigma3 family while its 1/r^2 terms
    /// are still active (constants not closed or gauge nonzero).
    #[error("sigma2/sigma3 family is singular on the axis: 1/r^2 terms do not cancel (coefficient {coefficient:.3e})")]
    AxisSingular { coefficient: f64 },

    /// Finite-difference step would straddle the singularity.
    #[error("finite-difference step {step:.3e} too large for point at rho = {rho:.3e}")]
    DegenerateStep { step: f64, rho: f64 },

    /// Field point too close to a nucleus for the requested arm length.
    #[error("field point at distance {distance:.3e} is within 10x the doublet arm {arm:.3e}")]
    NucleusTooClose { distance: f64, arm: f64 },
}

pub type Result<T> = std::result::Result<T, KelvinError>;
