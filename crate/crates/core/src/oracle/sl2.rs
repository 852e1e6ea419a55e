//! Closed-form factorizations of `n̄(x) = [[1, 0], [x, 1]]` in `SL(2,ℝ)`.
//!
//! `a = diag(e^s, e^{−s}) = exp(s·H_α)`; in the rank-one catalog coordinates
//! `H_α = (√2)`, so `a_log = (√2·s)`.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix2, DMatrix};

use super::{HANFactorization, OracleError};

fn nbar(x: f64) -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, x, 1.0)
}

fn to_dyn(m: &Matrix2<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(2, 2, m.as_slice())
}

fn unipotent_residual(n: &Matrix2<f64>) -> f64 {
    (n[(0, 0)] - 1.0).abs() + (n[(1, 1)] - 1.0).abs() + n[(1, 0)].abs()
}

/// `n̄(x) = h·a·n` with `h ∈ SO(1,1)`, valid exactly for `|x| < 1`:
/// `tanh t = x`, `e^s = √(1−x²)`, `n = [[1, −sinh t·e^{−s}], [0, 1]]`.
pub fn sl2_ncc_han(x: f64) -> Result<HANFactorization, OracleError> {
    if !x.is_finite() || x.abs() >= 1.0 {
        return Err(OracleError::OutsideOmega);
    }
    let t = x.atanh();
    let (ch, sh) = (t.cosh(), t.sinh());
    let es = (1.0 - x * x).sqrt();
    let s = 0.5 * (-x * x).ln_1p();
    let h = Matrix2::new(ch, sh, sh, ch);
    let a = Matrix2::new(es, 0.0, 0.0, 1.0 / es);
    let n = Matrix2::new(1.0, -sh / es, 0.0, 1.0);
    let residual = (h * a * n - nbar(x)).norm();
    let backward_error = residual / (h.norm() * a.norm() * n.norm());
    let j = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    let group_residual = (h.transpose() * j * h - j).norm() / h.norm_squared()
        + (h.determinant() - 1.0).abs()
        + unipotent_residual(&n);
    Ok(HANFactorization { h: to_dyn(&h), a_log: vec![SQRT_2 * s], n: to_dyn(&n), residual, backward_error, group_residual })
}

/// Iwasawa `n̄(x) = k·a·n` with `k ∈ SO(2)`: `e^s = √(1+x²)`.
pub fn sl2_riemannian_kan(x: f64) -> Result<HANFactorization, OracleError> {
    if !x.is_finite() {
        return Err(OracleError::InvalidConfig("x is not finite".into()));
    }
    let r = x.hypot(1.0);
    let (c, sn) = (1.0 / r, x / r);
    let k = Matrix2::new(c, -sn, sn, c);
    let s = r.ln();
    let a = Matrix2::new(r, 0.0, 0.0, 1.0 / r);
    let n = Matrix2::new(1.0, x / (r * r), 0.0, 1.0);
    let g = nbar(x);
    let residual = (k * a * n - g).norm();
    let backward_error = residual / (k.norm() * a.norm() * n.norm());
    let group_residual =
        (k.transpose() * k - Matrix2::identity()).norm() + (k.determinant() - 1.0).abs() + unipotent_residual(&n);
    Ok(HANFactorization { h: to_dyn(&k), a_log: vec![SQRT_2 * s], n: to_dyn(&n), residual, backward_error, group_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_zero() {
        for f in [sl2_ncc_han(0.0).unwrap(), sl2_riemannian_kan(0.0).unwrap()] {
            assert_eq!(f.a_log, vec![0.0]);
            assert!((f.h.clone() - DMatrix::identity(2, 2)).norm() < 1e-15);
            assert!((f.n.clone() - DMatrix::identity(2, 2)).norm() < 1e-15);
        }
    }

    #[test]
    fn ncc_examples() {
        let f = sl2_ncc_han(0.6).unwrap();
        let es = (f.a_log[0] / SQRT_2).exp();
        assert!((es - 0.8).abs() < 1e-15);
        assert!(f.residual <= 1e-12 && f.group_residual <= 1e-12);
        for x in [-0.999_999, -0.3, 0.95, 0.999_999_9] {
            let f = sl2_ncc_han(x).unwrap();
            assert!(f.backward_error <= 1e-15, "x = {x}: {}", f.backward_error);
        }
        assert_eq!(sl2_ncc_han(1.0), Err(OracleError::OutsideOmega));
        assert_eq!(sl2_ncc_han(-1.5), Err(OracleError::OutsideOmega));
    }

    #[test]
    fn riemannian_examples() {
        let f = sl2_riemannian_kan(1.0).unwrap();
        assert!(((f.a_log[0] / SQRT_2).exp() - SQRT_2).abs() < 1e-15);
        assert!(f.residual <= 1e-12 && f.group_residual <= 1e-12);
        let f = sl2_riemannian_kan(1e6).unwrap();
        let es = (f.a_log[0] / SQRT_2).exp();
        assert!(es.is_finite() && (es / 1e6 - 1.0).abs() < 1e-9);
        assert!(f.residual <= 1e-12 * 1e6 && f.backward_error <= 1e-15);
    }
}
