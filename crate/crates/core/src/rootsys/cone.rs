use nalgebra::{DMatrix, DVector};

use super::RootSystem;
use crate::vecops::{norm, scale};

/// Tolerance for cone membership on unit-normalized inputs.
pub const CONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    /// `C_min`, the closed convex cone spanned by `H_α`, `α ∈ Δ_n⁺`.
    Min,
    /// `C_max = {X : α(X) ≥ 0 for all α ∈ Δ_n⁺}`.
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeQuery {
    pub point: Vec<f64>,
    pub cone: Cone,
}

/// Decides `X ∈ C_min` or `X ∈ C_max`.
pub fn cone_member(rs: &RootSystem, q: &ConeQuery) -> bool {
    let n = norm(&q.point);
    if n <= f64::MIN_POSITIVE {
        return true;
    }
    let x = scale(&q.point, 1.0 / n);
    let noncompact = rs.noncompact_positive();
    match q.cone {
        Cone::Max => noncompact.iter().all(|&i| rs.root(i).eval(&x) >= -CONE_TOL),
        Cone::Min => {
            if noncompact.is_empty() {
                return false;
            }
            let cols: Vec<DVector<f64>> = noncompact
                .iter()
                .map(|&i| {
                    let h = rs.coroot_of(i);
                    DVector::from_vec(scale(h, 1.0 / norm(h)))
                })
                .collect();
            let a = DMatrix::from_columns(&cols);
            let b = DVector::from_vec(x);
            let (_, residual) = nonnegative_least_squares(&a, &b);
            residual <= CONE_TOL
        }
    }
}

/// Lawson–Hanson active-set solver for `min ‖A x − b‖` subject to `x ≥ 0`.
/// Returns the minimizer and the residual norm.
pub fn nonnegative_least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let n = a.ncols();
    let tol = 1e-13 * (1.0 + a.norm()) * (1.0 + b.norm());
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let max_outer = 3 * n + 10;

    for _ in 0..max_outer {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        match candidate {
            Some(j) if w[j] > tol => passive[j] = true,
            _ => break,
        }
        for _ in 0..(3 * n + 10) {
            let s = solve_on_passive(a, b, &passive);
            let blocking: Vec<usize> = (0..n).filter(|&i| passive[i] && s[i] <= 0.0).collect();
            if blocking.is_empty() {
                x = s;
                break;
            }
            let alpha = blocking
                .iter()
                .map(|&i| x[i] / (x[i] - s[i]))
                .fold(f64::INFINITY, f64::min);
            x += (s - &x) * alpha;
            for i in 0..n {
                if passive[i] && x[i] <= tol {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    let residual = (a * &x - b).norm();
    (x, residual)
}

fn solve_on_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let idx: Vec<usize> = (0..passive.len()).filter(|&i| passive[i]).collect();
    let mut out = DVector::zeros(passive.len());
    if idx.is_empty() {
        return out;
    }
    let sub = a.select_columns(&idx);
    let sol = sub
        .svd(true, true)
        .solve(b, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(idx.len()));
    for (k, &i) in idx.iter().enumerate() {
        out[i] = sol[k];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::cartan::tests::{rank_one, sp4};
    use crate::rootsys::cb_split;
    use crate::vecops::neg;
    use rand::{Rng, SeedableRng};

    #[test]
    fn nnls_recovers_nonnegative_combination() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]);
        let want = DVector::from_vec(vec![0.5, 0.0, 2.0]);
        let b = &a * &want;
        let (x, r) = nonnegative_least_squares(&a, &b);
        assert!(r < 1e-12);
        assert!((x - want).norm() < 1e-12);
        // A target outside the cone leaves a positive residual.
        let (_, r) = nonnegative_least_squares(&a, &DVector::from_vec(vec![-1.0, 0.0, 0.0]));
        assert!(r > 0.5);
    }

    #[test]
    fn lemma_examples() {
        for rs in [sp4(), rank_one()] {
            let (xc, xb) = cb_split(&rs, rs.x0());
            for p in [xc, xb] {
                assert!(cone_member(&rs, &ConeQuery { point: p, cone: Cone::Max }));
            }
            for h in rs.gamma_coroots() {
                assert!(cone_member(&rs, &ConeQuery { point: h.clone(), cone: Cone::Max }));
                assert!(cone_member(&rs, &ConeQuery { point: h, cone: Cone::Min }));
            }
        }
        let rs = rank_one();
        let h = neg(&rs.gamma_coroots()[0]);
        assert!(!cone_member(&rs, &ConeQuery { point: h.clone(), cone: Cone::Min }));
        assert!(!cone_member(&rs, &ConeQuery { point: h, cone: Cone::Max }));
    }

    #[test]
    fn cmin_inside_cmax_on_random_combinations() {
        let rs = sp4();
        let gens: Vec<Vec<f64>> =
            rs.noncompact_positive().iter().map(|&i| rs.coroot_of(i).to_vec()).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mut x = vec![0.0; rs.rank()];
            for g in &gens {
                crate::vecops::axpy(&mut x, rng.random::<f64>(), g);
            }
            assert!(cone_member(&rs, &ConeQuery { point: x.clone(), cone: Cone::Max }));
            assert!(cone_member(&rs, &ConeQuery { point: x, cone: Cone::Min }));
        }
    }

    #[test]
    fn sp4_cones_are_the_first_quadrant() {
        // Both cones are the closed first quadrant for C₂ with X₀ = (½, ½).
        let rs = sp4();
        assert!(!cone_member(&rs, &ConeQuery { point: vec![1.0, -0.1], cone: Cone::Max }));
        assert!(cone_member(&rs, &ConeQuery { point: vec![1.0, 0.1], cone: Cone::Min }));
        assert!(!cone_member(&rs, &ConeQuery { point: vec![1.0, -0.1], cone: Cone::Min }));
    }
}
