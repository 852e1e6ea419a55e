//! Rank-one integrals by radial reduction.
//!
//! Both integrals reduce to `Vol(S^{m−1})·J(m, p)` with
//! `J(m, p) = ∫₀^{π/2} cos^{m−1}φ sin^p φ dφ`:
//!
//! * NCC, `∫_{|x|<1} (1−|x|²)^{−(z+m)/2} dx`: `r = cos φ`, `p = 1 − z − m`;
//! * Riemannian, `∫_{ℝᵐ} (1+|x|²)^{−(z+m)/2} dx`: `r = cot φ`, `p = z − 1`.
//!
//! The `φ^p` singularity at `0` is integrated in closed form and only the
//! smooth remainder is handed to the quadrature.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::quad::{integrate, QuadratureConfig};
use super::OracleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank1Kind {
    Ncc,
    Riemannian,
}

/// `Vol(S^{m−1})`, the area of the unit sphere in `ℝᵐ`.
pub fn sphere_volume(m: u32) -> f64 {
    assert!(m >= 1, "ℝ⁰ has no unit sphere");
    // Vol(S^n) = 2π/(n−1) · Vol(S^{n−2})
    let n = m - 1;
    let (mut k, mut v) = if n.is_multiple_of(2) { (0, 2.0) } else { (1, 2.0 * PI) };
    while k < n {
        k += 2;
        v *= 2.0 * PI / f64::from(k - 1);
    }
    v
}

/// The integrand `(1 ∓ |x|²)^{−(z+m)/2}` at a point of `ℝᵐ`; zero outside the
/// unit ball in the NCC case.
pub fn rank1_density(kind: Rank1Kind, z: Complex64, x: &[f64]) -> Complex64 {
    let m = x.len() as f64;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let base = match kind {
        Rank1Kind::Ncc if r2 >= 1.0 => return Complex64::new(0.0, 0.0),
        Rank1Kind::Ncc => 1.0 - r2,
        Rank1Kind::Riemannian => 1.0 + r2,
    };
    (-(z + m) / 2.0 * base.ln()).exp()
}

// e^u − 1 without cancellation for small |u|.
fn expm1(u: Complex64) -> Complex64 {
    let (s, c) = u.im.sin_cos();
    let half = (0.5 * u.im).sin();
    Complex64::new(u.re.exp_m1() * c - 2.0 * half * half, u.re.exp() * s)
}

// ln(sin φ / φ) for φ ∈ (0, π/2].
fn ln_sinc(phi: f64) -> f64 {
    let d = if phi < 0.1 {
        let p2 = phi * phi;
        p2 * (-1.0 / 6.0 + p2 * (1.0 / 120.0 + p2 * (-1.0 / 5040.0 + p2 / 362_880.0)))
    } else {
        phi.sin() / phi - 1.0
    };
    d.ln_1p()
}

// ln cos φ for φ ∈ [0, π/2).
fn ln_cos(phi: f64) -> f64 {
    let s = (0.5 * phi).sin();
    (-2.0 * s * s).ln_1p()
}

/// `J(m, p) = ∫₀^{π/2} cos^{m−1}φ sin^p φ dφ` for `Re p > −1`.
pub(crate) fn half_beta_integral(m: u32, p: Complex64, cfg: &QuadratureConfig) -> Result<Complex64, OracleError> {
    let k = f64::from(m - 1);
    let split = FRAC_PI_4;
    // ∫₀^a φ^p dφ
    let main = (p + 1.0).inv() * (split.ln() * (p + 1.0)).exp();
    // ∫₀^a φ^p (cos^{m−1}φ (sin φ/φ)^p − 1) dφ, integrand O(φ^{p+2}).
    let remainder = integrate(
        |phi| {
            let u = k * ln_cos(phi) + p * ln_sinc(phi);
            (p * phi.ln()).exp() * expm1(u)
        },
        0.0,
        split,
        cfg,
    )?;
    let tail = integrate(
        |phi| {
            let c = if m == 1 { 1.0 } else { phi.cos().powi(m as i32 - 1) };
            (p * phi.sin().ln()).exp() * c
        },
        split,
        FRAC_PI_2,
        cfg,
    )?;
    Ok(main + remainder.value + tail.value)
}

/// Integral of [`rank1_density`] over the unit ball (NCC) or `ℝᵐ`
/// (Riemannian), where `z` plays the role of `λ(H_α)`.
pub fn quadrature_c_rank1(
    kind: Rank1Kind,
    m: u32,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64, OracleError> {
    if m == 0 {
        return Err(OracleError::InvalidConfig("multiplicity must be positive".into()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(OracleError::InvalidConfig(format!("z = {z} is not finite")));
    }
    let mf = f64::from(m);
    let p = match kind {
        Rank1Kind::Ncc if z.re >= 2.0 - mf => {
            return Err(OracleError::OutOfDomain(format!("Re z = {} ≥ 2 − m = {}", z.re, 2.0 - mf)))
        }
        Rank1Kind::Riemannian if z.re <= 0.0 => {
            return Err(OracleError::OutOfDomain(format!("Re z = {} ≤ 0", z.re)))
        }
        Rank1Kind::Ncc => 1.0 - z - mf,
        Rank1Kind::Riemannian => z - 1.0,
    };
    Ok(half_beta_integral(m, p, cfg)? * sphere_volume(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn sphere_volumes() {
        assert_eq!(sphere_volume(1), 2.0);
        assert!((sphere_volume(2) - 2.0 * PI).abs() < 1e-15);
        assert!((sphere_volume(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_volume(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn spot_values() {
        let z = |x: f64| Complex64::new(x, 0.0);
        let v = quadrature_c_rank1(Rank1Kind::Ncc, 1, z(-1.0), &cfg()).unwrap();
        assert!((v - z(2.0)).norm() < 1e-12);
        let v = quadrature_c_rank1(Rank1Kind::Ncc, 1, z(0.0), &cfg()).unwrap();
        assert!((v - z(PI)).norm() < 1e-12);
        let v = quadrature_c_rank1(Rank1Kind::Riemannian, 1, z(1.0), &cfg()).unwrap();
        assert!((v - z(PI)).norm() < 1e-12);
        let v = quadrature_c_rank1(Rank1Kind::Riemannian, 1, z(2.0), &cfg()).unwrap();
        assert!((v - z(2.0)).norm() < 1e-12);
        // Volume of the unit ball in ℝ³ at z = −3 (constant integrand).
        let v = quadrature_c_rank1(Rank1Kind::Ncc, 3, z(-3.0), &cfg()).unwrap();
        assert!((v - z(4.0 * PI / 3.0)).norm() < 1e-12);
    }

    #[test]
    fn domain_edges() {
        let z = Complex64::new(1.0, 0.3);
        assert!(matches!(quadrature_c_rank1(Rank1Kind::Ncc, 1, z, &cfg()), Err(OracleError::OutOfDomain(_))));
        let z = Complex64::new(0.0, 2.0);
        assert!(matches!(
            quadrature_c_rank1(Rank1Kind::Riemannian, 2, z, &cfg()),
            Err(OracleError::OutOfDomain(_))
        ));
    }

    #[test]
    fn density_matches_radial_form_for_m_one() {
        // J(1, p) as ∫₀¹ (1−r²)^{−(z+1)/2} dr directly, away from the singular end.
        let z = Complex64::new(-2.5, 0.7);
        let direct = integrate(|r| rank1_density(Rank1Kind::Ncc, z, &[r]), 0.0, 1.0, &cfg()).unwrap();
        let reduced = quadrature_c_rank1(Rank1Kind::Ncc, 1, z, &cfg()).unwrap() / 2.0;
        assert!((direct.value - reduced).norm() < 1e-11 * reduced.norm());
    }
}
