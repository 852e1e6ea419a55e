//! Monte Carlo for `c_Ω(λ) = ∫_{N̄∩Ω} a(n̄)^{−(λ+ρ)} dn̄` in `Sp(4,ℝ)`.
//!
//! `N̄ ≅ Sym(2,ℝ)` with the Lebesgue measure of the trace form, i.e. in the
//! coordinates `u = (X₁₁, X₂₂, √2·X₁₂)`. Points are drawn uniformly from the
//! box `[−1,1]² × [−√2,√2] ⊃ Ω` and `a(X)` comes from the Newton
//! factorization. Seeds are split into independent ChaCha streams, one rayon
//! task each, and recombined in stream order so results do not depend on the
//! thread count.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sp4::{a_log_newton, Sym2};
use super::OracleError;
use crate::cfunc::{c_omega, Functional};
use crate::rootsys::RootSystem;

/// Points with spectral radius in `[1 − OMEGA_MARGIN, 1)` are rejected along
/// with the exterior: `a(X)` is ill-conditioned there and the excluded volume
/// is negligible.
pub const OMEGA_MARGIN: f64 = 1e-12;

const BOX_VOLUME: f64 = 8.0 * SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MCConfig {
    pub samples: usize,
    pub seed: u64,
    pub streams: u64,
    /// First stream index; estimates that must be independent use disjoint
    /// ranges.
    pub stream_offset: u64,
}

impl MCConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        MCConfig { samples, seed, streams: 32, stream_offset: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: Complex64,
    /// Standard error of `estimate`, combining real and imaginary parts.
    pub stderr: f64,
    pub accepted: usize,
    pub samples: usize,
}

impl McEstimate {
    /// `self / other` with a first-order (delta-method) standard error,
    /// assuming independent estimates.
    pub fn ratio(&self, other: &McEstimate) -> (Complex64, f64) {
        let r = self.estimate / other.estimate;
        let rel = (self.stderr / self.estimate.norm()).hypot(other.stderr / other.estimate.norm());
        (r, r.norm() * rel)
    }
}

fn draw(rng: &mut ChaCha8Rng) -> Sym2 {
    let x11 = rng.random_range(-1.0..1.0);
    let x22 = rng.random_range(-1.0..1.0);
    let u3: f64 = rng.random_range(-SQRT_2..SQRT_2);
    Sym2::new(x11, u3 / SQRT_2, x22)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn accepted(x: &Sym2) -> bool {
    x.spectral_radius() < 1.0 - OMEGA_MARGIN
}

/// The accepted points among `samples` uniform draws from the box, as a single
/// stream.
pub fn sample_omega(samples: usize, seed: u64) -> Vec<Sym2> {
    let mut rng = stream_rng(seed, 0);
    (0..samples).map(|_| draw(&mut rng)).filter(accepted).collect()
}

#[derive(Default)]
struct Moments {
    sum: Complex64,
    sum_sq: f64,
    accepted: usize,
}

fn run_stream(exponent: [Complex64; 2], seed: u64, stream: u64, n: usize) -> Result<Moments, OracleError> {
    let mut rng = stream_rng(seed, stream);
    let mut m = Moments::default();
    for _ in 0..n {
        let x = draw(&mut rng);
        if !accepted(&x) {
            continue;
        }
        let a = a_log_newton(&x)?;
        let f = (-(exponent[0] * a[0] + exponent[1] * a[1])).exp();
        m.sum += f;
        m.sum_sq += f.norm_sqr();
        m.accepted += 1;
    }
    Ok(m)
}

/// Estimates `c_Ω(λ)` for the `sp4r-gl2r` root system `rs`, with `λ` in the
/// coordinates `(λ₁, λ₂)` of `a = diag(a₁, a₂, −a₁, −a₂)`.
pub fn mc_c_omega_sp4(rs: &RootSystem, lambda: &Functional, cfg: &MCConfig) -> Result<McEstimate, OracleError> {
    if rs.rank() != 2 || lambda.dim() != 2 {
        return Err(OracleError::InvalidConfig("the Sp(4,ℝ) oracle needs a rank-two λ".into()));
    }
    if cfg.samples == 0 || cfg.streams == 0 {
        return Err(OracleError::InvalidConfig("samples and streams must be positive".into()));
    }
    let cv = c_omega(rs, lambda).map_err(|e| OracleError::InvalidConfig(e.to_string()))?;
    if !cv.in_domain {
        return Err(OracleError::OutOfDomain(format!("λ = {lambda:?} is outside the domain of c_Ω")));
    }
    let rho = rs.rho();
    let exponent = [
        Complex64::new(lambda.re[0] + rho[0], lambda.im[0]),
        Complex64::new(lambda.re[1] + rho[1], lambda.im[1]),
    ];
    let streams = cfg.streams as usize;
    let per = cfg.samples / streams;
    let extra = cfg.samples % streams;
    let parts: Vec<Result<Moments, OracleError>> = (0..streams)
        .into_par_iter()
        .map(|k| run_stream(exponent, cfg.seed, cfg.stream_offset + k as u64, per + usize::from(k < extra)))
        .collect();
    let mut total = Moments::default();
    for p in parts {
        let p = p?;
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        total.accepted += p.accepted;
    }
    let n = cfg.samples as f64;
    let mean = total.sum / n;
    let var = (total.sum_sq / n - mean.norm_sqr()).max(0.0) * n / (n - 1.0).max(1.0);
    Ok(McEstimate {
        estimate: mean * BOX_VOLUME,
        stderr: BOX_VOLUME * (var / n).sqrt(),
        accepted: total.accepted,
        samples: cfg.samples,
    })
}
