//! `G = Sp(4,ℝ)`, `H ≅ GL(2,ℝ)`.
//!
//! Conventions, all in the defining 4×4 representation with symplectic form
//! `J = [[0, I], [−I, 0]]`:
//!
//! * `sp(4) = {[[A, B], [C, −Aᵀ]] : B, C symmetric}`, `θ(X) = −Xᵀ`;
//! * `τ(X) = −J₀XᵀJ₀` with `J₀ = diag(I, −I)`, so
//!   `h = {[[A, B], [B, A]] : A skew, B symmetric}` and `H` preserves `J₀`;
//! * `a = {diag(a₁, a₂, −a₁, −a₂)}`, `X₀ = (½, ½)`;
//! * `n` is spanned by the `B`-block (roots `2e₁, 2e₂, e₁+e₂`) and the
//!   `A`-block entry `E₂₁` (root `e₂ − e₁`), so `N` is unit upper triangular
//!   in the basis order `(e₂, e₁, f₁, f₂)`;
//! * `n̄(X) = [[I, 0], [X, I]]` for `X ∈ Sym(2,ℝ) = n_n⁻`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, Matrix2, Matrix4, SMatrix};

use super::{HANFactorization, OracleError};

/// A real symmetric 2×2 matrix `[[x11, x12], [x12, x22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub x11: f64,
    pub x12: f64,
    pub x22: f64,
}

impl Sym2 {
    pub fn new(x11: f64, x12: f64, x22: f64) -> Self {
        Sym2 { x11, x12, x22 }
    }

    pub fn diag(x11: f64, x22: f64) -> Self {
        Sym2 { x11, x12: 0.0, x22 }
    }

    /// Checks symmetry of an arbitrary 2×2 matrix.
    pub fn try_from_matrix(m: &Matrix2<f64>) -> Result<Self, OracleError> {
        let scale = m.abs().max().max(1.0);
        if (m[(0, 1)] - m[(1, 0)]).abs() > 1e-12 * scale {
            return Err(OracleError::NotSymmetric);
        }
        Ok(Sym2 { x11: m[(0, 0)], x12: 0.5 * (m[(0, 1)] + m[(1, 0)]), x22: m[(1, 1)] })
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.x11, self.x12, self.x12, self.x22)
    }

    pub fn scaled(&self, t: f64) -> Self {
        Sym2 { x11: t * self.x11, x12: t * self.x12, x22: t * self.x22 }
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.x11 + self.x22);
        let r = (0.5 * (self.x11 - self.x22)).hypot(self.x12);
        (mean - r, mean + r)
    }

    pub fn spectral_radius(&self) -> f64 {
        let (lo, hi) = self.eigenvalues();
        lo.abs().max(hi.abs())
    }
}

/// A point of `n_n⁻ = Sym(2,ℝ)` tagged with its membership in `Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaSample {
    pub point: Sym2,
    pub inside: bool,
}

impl OmegaSample {
    pub fn new(point: Sym2) -> Self {
        OmegaSample { point, inside: point.spectral_radius() < 1.0 }
    }
}

/// `X ∈ Ω ⇔` both eigenvalues of `X` lie in `(−1, 1)`.
pub fn sp4_omega_member(x: &Matrix2<f64>) -> Result<bool, OracleError> {
    Ok(Sym2::try_from_matrix(x)?.spectral_radius() < 1.0)
}

type M4 = Matrix4<f64>;

fn block(a: Matrix2<f64>, b: Matrix2<f64>, c: Matrix2<f64>, d: Matrix2<f64>) -> M4 {
    let mut m = M4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&d);
    m
}

fn symplectic_form() -> M4 {
    block(Matrix2::zeros(), Matrix2::identity(), -Matrix2::identity(), Matrix2::zeros())
}

fn j0() -> M4 {
    M4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, -1.0, -1.0))
}

fn nbar(x: &Sym2) -> M4 {
    block(Matrix2::identity(), Matrix2::zeros(), x.matrix(), Matrix2::identity())
}

fn a_matrix(a: [f64; 2]) -> M4 {
    let (e1, e2) = (a[0].exp(), a[1].exp());
    M4::from_diagonal(&nalgebra::Vector4::new(e1, e2, 1.0 / e1, 1.0 / e2))
}

// g⁻¹ = −J gᵀ J for symplectic g.
fn sp_inverse(g: &M4) -> M4 {
    let j = symplectic_form();
    -(j * g.transpose() * j)
}

/// Basis of `h ⊕ a ⊕ n`: four elements of `h`, two of `a`, four of `n`.
fn basis() -> &'static [M4; 10] {
    static BASIS: OnceLock<[M4; 10]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let z = Matrix2::zeros();
        let skew = Matrix2::new(0.0, 1.0, -1.0, 0.0);
        let e11 = Matrix2::new(1.0, 0.0, 0.0, 0.0);
        let e22 = Matrix2::new(0.0, 0.0, 0.0, 1.0);
        let s12 = Matrix2::new(0.0, 1.0, 1.0, 0.0);
        let e21 = Matrix2::new(0.0, 0.0, 1.0, 0.0);
        [
            block(skew, z, z, skew),
            block(z, e11, e11, z),
            block(z, e22, e22, z),
            block(z, s12, s12, z),
            block(e11, z, z, -e11),
            block(e22, z, z, -e22),
            block(z, e11, z, z),
            block(z, e22, z, z),
            block(z, s12, z, z),
            block(e21, z, z, -e21.transpose()),
        ]
    })
}

/// Left inverse of the 16×10 matrix whose columns are the flattened basis.
fn coordinates() -> &'static SMatrix<f64, 10, 16> {
    static PINV: OnceLock<SMatrix<f64, 10, 16>> = OnceLock::new();
    PINV.get_or_init(|| {
        let mut b = SMatrix::<f64, 16, 10>::zeros();
        for (k, m) in basis().iter().enumerate() {
            b.set_column(k, &SMatrix::<f64, 16, 1>::from_column_slice(m.as_slice()));
        }
        let gram = b.transpose() * b;
        gram.try_inverse().expect("h ⊕ a ⊕ n is a direct sum") * b.transpose()
    })
}

#[derive(Debug, Clone, Copy)]
struct State {
    h: M4,
    a: [f64; 2],
    n: M4,
}

impl State {
    fn identity() -> Self {
        State { h: M4::identity(), a: [0.0; 2], n: M4::identity() }
    }

    fn product(&self) -> M4 {
        self.h * a_matrix(self.a) * self.n
    }

    fn backward_error(&self, g: &M4) -> f64 {
        (g - self.product()).norm() / (self.h.norm() * a_matrix(self.a).norm() * self.n.norm())
    }
}

// Newton works on the normwise backward error ‖g − han‖ / (‖h‖‖a‖‖n‖): near
// ∂Ω the factors grow like 1/dist(X, ∂Ω) and the absolute residual has a
// rounding floor of order ε‖h‖‖a‖‖n‖.
const NEWTON_TOL: f64 = 2e-15;
const MAX_NEWTON: usize = 30;
const MIN_STEP: f64 = 1e-6;

// Newton's method for h·a·n = g from `start`. Returns the converged state or
// the best residual reached.
fn newton(g: &M4, start: State) -> Result<State, f64> {
    let mut s = start;
    let mut residual = s.backward_error(g);
    for _ in 0..MAX_NEWTON {
        if residual <= NEWTON_TOL {
            return Ok(s);
        }
        let am = a_matrix(s.a);
        let am_inv = a_matrix([-s.a[0], -s.a[1]]);
        let r = g - s.h * am * s.n;
        let f = sp_inverse(&s.h) * r * sp_inverse(&s.n) * am_inv;
        let c = coordinates() * SMatrix::<f64, 16, 1>::from_column_slice(f.as_slice());
        let b = basis();
        let xi: M4 = (0..4).map(|k| b[k] * c[k]).sum();
        let nu: M4 = (6..10).map(|k| b[k] * c[k]).sum();
        let next = State {
            h: s.h * xi.exp(),
            a: [s.a[0] + c[4], s.a[1] + c[5]],
            n: (am_inv * nu * am).exp() * s.n,
        };
        let next_residual = next.backward_error(g);
        if !next_residual.is_finite() || next_residual > 10.0 * residual.max(1e-300) && next_residual > 1e-8 {
            return Err(next_residual);
        }
        s = next;
        residual = next_residual;
    }
    if residual <= 1e2 * NEWTON_TOL {
        Ok(s)
    } else {
        Err(residual)
    }
}

fn solve(x: &Sym2) -> Result<State, OracleError> {
    let mut state = State::identity();
    let mut t = 0.0;
    let mut dt: f64 = 1.0;
    while t < 1.0 {
        let target = (t + dt).min(1.0);
        match newton(&nbar(&x.scaled(target)), state) {
            Ok(s) => {
                state = s;
                t = target;
                dt = (2.0 * dt).min(1.0);
            }
            Err(residual) => {
                dt *= 0.5;
                if dt < MIN_STEP {
                    return Err(OracleError::NewtonDivergence { t: target, residual });
                }
            }
        }
    }
    Ok(state)
}

/// `a_log = (a₁, a₂)` of `n̄(X) = h·a·n`, without matrices.
pub(crate) fn a_log_newton(x: &Sym2) -> Result<[f64; 2], OracleError> {
    if x.spectral_radius() >= 1.0 {
        return Err(OracleError::OutsideOmega);
    }
    Ok(solve(x)?.a)
}

fn group_residual(s: &State) -> f64 {
    let j = symplectic_form();
    let j0 = j0();
    let h = &s.h;
    let n = &s.n;
    let (hh, nn) = (h.norm_squared(), n.norm_squared());
    let mut r = ((h.transpose() * j * h - j).norm() + (h.transpose() * j0 * h - j0).norm()) / hh;
    r += (n.transpose() * j * n - j).norm() / nn;
    // Unit upper triangular in the order (e₂, e₁, f₁, f₂).
    let order = [1, 0, 2, 3];
    for (p, &i) in order.iter().enumerate() {
        r += (n[(i, i)] - 1.0).abs();
        for &k in &order[..p] {
            r += n[(i, k)].abs();
        }
    }
    r
}

/// Factors `n̄(X) = h·a·n` by Newton's method along the path `t ↦ n̄(tX)`.
pub fn sp4_han(x: &Sym2) -> Result<HANFactorization, OracleError> {
    if x.spectral_radius() >= 1.0 {
        return Err(OracleError::OutsideOmega);
    }
    let s = solve(x)?;
    let g = nbar(x);
    let residual = (g - s.product()).norm();
    let dynamic = |m: &M4| DMatrix::from_column_slice(4, 4, m.as_slice());
    Ok(HANFactorization {
        h: dynamic(&s.h),
        a_log: s.a.to_vec(),
        n: dynamic(&s.n),
        residual,
        backward_error: s.backward_error(&g),
        group_residual: group_residual(&s),
    })
}

/// `a_log` from the leading principal minors of `n̄(X)ᵀ J₀ n̄(X) = nᵀ J₀ a² n`
/// in the order `(e₂, e₁, …)`: `a₂ = ½ ln(1 − (X²)₂₂)`,
/// `a₁ = ½ ln det(I − X²) − a₂`. Independent of the Newton solver.
pub fn sp4_a_log_from_minors(x: &Sym2) -> Result<[f64; 2], OracleError> {
    let m = Matrix2::identity() - x.matrix() * x.matrix();
    let (d1, d2) = (m[(1, 1)], m.determinant());
    if d1 <= 0.0 || d2 <= 0.0 {
        return Err(OracleError::OutsideOmega);
    }
    let a2 = 0.5 * d1.ln();
    Ok([0.5 * d2.ln() - a2, a2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_lies_in_sp4_and_splits() {
        let j = symplectic_form();
        for b in basis() {
            assert!((b.transpose() * j + j * b).norm() < 1e-15);
        }
        let t: M4 = (0..4).map(|k| basis()[k]).sum();
        // τ-fixed elements: −J₀XᵀJ₀ = X.
        assert!((-(j0() * t.transpose() * j0()) - t).norm() < 1e-15);
    }

    #[test]
    fn omega_membership() {
        let m = |a: f64, b: f64, c: f64, d: f64| Matrix2::new(a, b, c, d);
        assert!(sp4_omega_member(&m(0.0, 0.0, 0.0, 0.0)).unwrap());
        assert!(sp4_omega_member(&m(0.9, 0.0, 0.0, -0.5)).unwrap());
        assert!(!sp4_omega_member(&m(1.0, 0.0, 0.0, 0.0)).unwrap());
        // Eigenvalues 0.7 and 1.2.
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let r = m(c, -s, s, c);
        let x = r * m(0.7, 0.0, 0.0, 1.2) * r.transpose();
        assert!(!sp4_omega_member(&x).unwrap());
        assert_eq!(sp4_omega_member(&m(0.1, 0.2, 0.3, 0.1)), Err(OracleError::NotSymmetric));
    }

    #[test]
    fn identity_at_zero() {
        let f = sp4_han(&Sym2::diag(0.0, 0.0)).unwrap();
        assert_eq!(f.a_log, vec![0.0, 0.0]);
        assert!(f.residual == 0.0);
    }

    #[test]
    fn factorization_is_sound() {
        for x in [
            Sym2::new(0.5, 0.4, -0.3),
            Sym2::diag(0.99, 0.99),
            Sym2::diag(-0.99, 0.99),
            Sym2::new(0.0, 0.95, 0.0),
            Sym2::new(-0.2, 0.5, 0.6),
        ] {
            let f = sp4_han(&x).unwrap();
            assert!(f.residual <= 1e-9, "{x:?}: residual {}", f.residual);
            assert!(f.group_residual <= 1e-9, "{x:?}: group residual {}", f.group_residual);
            let m = sp4_a_log_from_minors(&x).unwrap();
            assert!((f.a_log[0] - m[0]).abs() < 1e-10 && (f.a_log[1] - m[1]).abs() < 1e-10, "{x:?}");
        }
    }

    #[test]
    fn outside_omega() {
        assert_eq!(sp4_han(&Sym2::diag(1.0, 0.0)), Err(OracleError::OutsideOmega));
        assert_eq!(sp4_a_log_from_minors(&Sym2::diag(0.0, 1.2)), Err(OracleError::OutsideOmega));
    }
}
