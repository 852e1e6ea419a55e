//! Direct numerical evaluation of the defining integrals.
//!
//! Nothing here calls into [`crate::cfunc`]'s Beta kernel: the rank-one
//! integrals are done by adaptive quadrature and the `Sp(4,ℝ)` integral by
//! Monte Carlo over a Newton-computed `HAN` factorization, so the product
//! formulas can be checked against them. All comparisons are ratio-based,
//! because the Haar measure on `N̄` is only fixed up to a constant.

mod geometry;
mod montecarlo;
mod quad;
mod rank1;
mod sl2;
mod sp4;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::vecops::{dot, norm2};

pub use geometry::{
    contraction_check, projection_property_check, root_projections, signature_invariance_check,
    GeometryReport,
};
pub use montecarlo::{mc_c_omega_sp4, sample_omega, MCConfig, McEstimate, OMEGA_MARGIN};
pub use quad::{integrate, QuadResult, QuadratureConfig};
pub use rank1::{quadrature_c_rank1, rank1_density, sphere_volume, Rank1Kind};
pub use sl2::{sl2_ncc_han, sl2_riemannian_kan};
pub use sp4::{sp4_a_log_from_minors, sp4_han, sp4_omega_member, OmegaSample, Sym2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("point lies outside Ω; no HAN factorization exists")]
    OutsideOmega,
    #[error("integral diverges: {0}")]
    OutOfDomain(String),
    #[error("quadrature did not reach tolerance: {0}")]
    QuadratureFailure(String),
    #[error("Newton iteration diverged at homotopy parameter t = {t} (residual {residual:.3e})")]
    NewtonDivergence { t: f64, residual: f64 },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// `g = h·a·n` with `a = exp(a_log)`.
///
/// `a_log` is given in the coordinates of the matching catalog entry, so that
/// `λ(log a)` is the Euclidean pairing with the entry's `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HANFactorization {
    pub h: DMatrix<f64>,
    pub a_log: Vec<f64>,
    pub n: DMatrix<f64>,
    /// `‖h·a·n − g‖` (Frobenius).
    pub residual: f64,
    /// `‖h·a·n − g‖ / (‖h‖‖a‖‖n‖)`; unlike `residual` this stays at rounding
    /// level as `g` approaches the boundary of `HAN`.
    pub backward_error: f64,
    /// Sum of the defining-equation residuals of `h ∈ H` and `n ∈ N`, each
    /// quadratic one divided by the squared norm of its factor.
    pub group_residual: f64,
}

impl HANFactorization {
    /// Coefficient of `log a` along the coroot `H`: `⟨a_log, H⟩ / ⟨H, H⟩`.
    pub fn coroot_coefficient(&self, h: &[f64]) -> f64 {
        dot(&self.a_log, h) / norm2(h)
    }
}
