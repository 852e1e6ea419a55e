//! Restricted root systems of NCC symmetric Lie algebras.
//!
//! Roots are stored as coordinate vectors in `ℝ^rank`, where the Killing
//! inner product has been rescaled to the Euclidean one. The element `X₀`
//! spanning the centre of `q ∩ p` lives in the same space, so `α(X₀)` is a
//! dot product. Compact roots are those with `α(X₀) = 0`.
//!
//! The positive system `Δ⁺` is fixed at construction time: it contains
//! `Δ_n⁺ = {α : α(X₀) = 1}` and a positive system of `Δ_k` that is adapted to
//! the strongly orthogonal cascade `Γ`, so that the compact positive roots
//! restrict to `c = span{H_γ}` as `½(γ_i − γ_j)` (`j < i`) or `−½γ_i`.

mod cartan;
mod cascade;
mod cone;
mod signature;
mod validate;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::vecops::{add, approx_eq, axpy, dot, lex_cmp, neg, norm, norm2, scale, sub};

pub use cartan::{build_root_system, CartanType, Multiplicities};
pub use cascade::strongly_orthogonal_cascade;
pub use cone::{cone_member, nonnegative_least_squares, Cone, ConeQuery, CONE_TOL};
pub use signature::{all_signatures, make_signature, Sign, Signature};
pub use validate::{validate_structure, CheckStatus, Severity, StructureCheck, ValidationReport};

/// Tolerance used to compare root coordinates and values `α(X)`.
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootSystemError {
    #[error("root system is not reduced: both α and 2α occur for α = {root:?}")]
    NonReduced { root: Vec<f64> },
    #[error("α(X₀) = {value} for α = {root:?}; expected one of -1, 0, 1")]
    BadX0 { root: Vec<f64>, value: f64 },
    #[error("inconsistent multiplicities: {0}")]
    InconsistentMultiplicity(String),
    #[error("invalid rank {rank} for Cartan type {cartan}")]
    BadRank { cartan: String, rank: usize },
    #[error("malformed root data: {0}")]
    Malformed(String),
    #[error("{0:?} is not a root")]
    NotARoot(Vec<f64>),
    #[error("there are no non-compact positive roots")]
    EmptyNoncompact,
    #[error("not a positive system: {0}")]
    NotPositiveSystem(String),
    #[error("signature assignment misses {missing} simple root(s)")]
    IncompleteAssignment { missing: usize },
    #[error("root #{0} is not simple")]
    NotASimpleRoot(usize),
    #[error("vector {0:?} is not regular")]
    Irregular(Vec<f64>),
}

/// A restricted root `α` with its multiplicity `m_α = dim g^α`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RootVector {
    pub coords: Vec<f64>,
    pub multiplicity: u32,
    /// `α(X₀) = 0`.
    pub compact: bool,
}

impl RootVector {
    /// `α(X)` for `X ∈ a` given in the same coordinates.
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.coords, x)
    }

    pub fn norm2(&self) -> f64 {
        norm2(&self.coords)
    }
}

/// Restricted root data `Δ(g, a)` of an NCC symmetric Lie algebra.
#[derive(Debug, Clone)]
pub struct RootSystem {
    rank: usize,
    roots: Vec<RootVector>,
    x0: Vec<f64>,
    negation: Vec<usize>,
    positive: Vec<bool>,
    gamma: Vec<usize>,
    coroots: Vec<Vec<f64>>,
    long_norm2: f64,
}

impl RootSystem {
    /// Builds a root system from explicit `(coordinates, multiplicity)` pairs.
    ///
    /// The list must be closed under negation with equal multiplicities on
    /// `±α`. Reducedness is *not* enforced here; [`validate_structure`]
    /// reports it and [`build_root_system`] rejects it.
    pub fn from_roots(
        rank: usize,
        roots: Vec<(Vec<f64>, u32)>,
        x0: Vec<f64>,
    ) -> Result<Self, RootSystemError> {
        if x0.len() != rank {
            return Err(RootSystemError::Malformed(format!(
                "x0 has {} coordinates, rank is {rank}",
                x0.len()
            )));
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(RootSystemError::Malformed("x0 is not finite".into()));
        }
        let mut list: Vec<RootVector> = Vec::with_capacity(roots.len());
        for (coords, multiplicity) in roots {
            if coords.len() != rank || coords.iter().any(|v| !v.is_finite()) {
                return Err(RootSystemError::Malformed(format!(
                    "root {coords:?} does not live in ℝ^{rank}"
                )));
            }
            if norm(&coords) <= ROOT_TOL {
                return Err(RootSystemError::Malformed("zero root".into()));
            }
            if multiplicity == 0 {
                return Err(RootSystemError::InconsistentMultiplicity(format!(
                    "root {coords:?} has multiplicity 0"
                )));
            }
            if list.iter().any(|r| approx_eq(&r.coords, &coords, ROOT_TOL)) {
                return Err(RootSystemError::Malformed(format!("duplicate root {coords:?}")));
            }
            let value = dot(&coords, &x0);
            let nearest = value.round();
            if (value - nearest).abs() > ROOT_TOL || nearest.abs() > 1.0 {
                return Err(RootSystemError::BadX0 { root: coords, value });
            }
            list.push(RootVector { coords, multiplicity, compact: nearest == 0.0 });
        }
        list.sort_by(|a, b| lex_cmp(&b.coords, &a.coords, ROOT_TOL));

        let mut negation = Vec::with_capacity(list.len());
        for r in &list {
            let minus = neg(&r.coords);
            let j = list
                .iter()
                .position(|s| approx_eq(&s.coords, &minus, ROOT_TOL))
                .ok_or_else(|| {
                    RootSystemError::Malformed(format!("-{:?} is missing", r.coords))
                })?;
            if list[j].multiplicity != r.multiplicity {
                return Err(RootSystemError::InconsistentMultiplicity(format!(
                    "m differs on ±{:?}",
                    r.coords
                )));
            }
            negation.push(j);
        }

        let coroots = list.iter().map(|r| scale(&r.coords, 2.0 / r.norm2())).collect();
        let long_norm2 = list.iter().map(RootVector::norm2).fold(0.0, f64::max);

        let mut rs = RootSystem {
            rank,
            roots: list,
            x0,
            negation,
            positive: Vec::new(),
            gamma: Vec::new(),
            coroots,
            long_norm2,
        };
        let noncompact_positive: Vec<usize> = (0..rs.roots.len())
            .filter(|&i| rs.roots[i].eval(&rs.x0) > 0.5)
            .collect();
        rs.gamma = cascade::maximal_strongly_orthogonal(&rs, &noncompact_positive);
        rs.positive = rs.adapted_positive_system()?;
        Ok(rs)
    }

    /// Returns a copy with `±coords` added as an extra root pair. Used to
    /// probe the validator with non-reduced data.
    pub fn with_extra_root(&self, coords: Vec<f64>, multiplicity: u32) -> Result<Self, RootSystemError> {
        let mut roots: Vec<(Vec<f64>, u32)> =
            self.roots.iter().map(|r| (r.coords.clone(), r.multiplicity)).collect();
        roots.push((neg(&coords), multiplicity));
        roots.push((coords, multiplicity));
        RootSystem::from_roots(self.rank, roots, self.x0.clone())
    }

    // Picks `v = M·X₀ + w` with `γ_1(w) < … < γ_r(w) < 0` on the cascade plus a
    // small generic perturbation, and returns `{α : α(v) > 0}`.
    fn adapted_positive_system(&self) -> Result<Vec<bool>, RootSystemError> {
        let r = self.gamma.len();
        let mut w = vec![0.0; self.rank];
        for (i, &g) in self.gamma.iter().enumerate() {
            let c = -((r - i) as f64);
            axpy(&mut w, c, &self.coroots[g]);
        }
        let generic: Vec<f64> = (0..self.rank)
            .map(|k| {
                let p = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0];
                let s = p[k % p.len()].sqrt() + k as f64 * 0.618_033_988_749_895;
                s.fract() + 0.1
            })
            .collect();
        let max_len = self.long_norm2.sqrt().max(1.0);
        let delta = 0.05 / (max_len * norm(&generic));
        axpy(&mut w, delta, &generic);
        let bound = self.roots.iter().map(|a| a.eval(&w).abs()).fold(0.0, f64::max);
        let v = add(&scale(&self.x0, 2.0 * bound + 1.0), &w);
        let members: Vec<bool> = self.roots.iter().map(|a| a.eval(&v) > 0.0).collect();
        if self.roots.iter().any(|a| a.eval(&v).abs() < 1e-8) {
            return Err(RootSystemError::Irregular(v));
        }
        Ok(members)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[RootVector] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &RootVector {
        &self.roots[i]
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    /// Index of `-α` for the root with index `i`.
    pub fn negation_of(&self, i: usize) -> usize {
        self.negation[i]
    }

    /// Index of the root with the given coordinates, if any.
    pub fn find(&self, coords: &[f64]) -> Option<usize> {
        if coords.len() != self.rank {
            return None;
        }
        self.roots.iter().position(|r| approx_eq(&r.coords, coords, 1e-9))
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.positive[i]
    }

    /// Indices of `Δ⁺`.
    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| self.positive[i]).collect()
    }

    /// Indices of `Δ_n⁺ = {α : α(X₀) = 1}`.
    pub fn noncompact_positive(&self) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&i| self.positive[i] && !self.roots[i].compact)
            .collect()
    }

    /// Indices of `Δ_k⁺`.
    pub fn compact_positive(&self) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&i| self.positive[i] && self.roots[i].compact)
            .collect()
    }

    /// Indices of `Δ_k`.
    pub fn compact_roots(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| self.roots[i].compact).collect()
    }

    pub fn is_long(&self, i: usize) -> bool {
        self.roots[i].norm2() >= self.long_norm2 * (1.0 - 1e-9)
    }

    /// Indices of the cascade `Γ = [γ₁, …, γ_r]`, in order.
    pub fn gamma_indices(&self) -> &[usize] {
        &self.gamma
    }

    /// `H_i = H_{γ_i}` for the cascade.
    pub fn gamma_coroots(&self) -> Vec<Vec<f64>> {
        self.gamma.iter().map(|&g| self.coroots[g].clone()).collect()
    }

    /// `H_α` for the root with index `i`.
    pub fn coroot_of(&self, i: usize) -> &[f64] {
        &self.coroots[i]
    }

    /// `ρ = ½ Σ_{α ∈ Δ⁺} m_α α`.
    pub fn rho(&self) -> Vec<f64> {
        let mut rho = vec![0.0; self.rank];
        for i in self.positive_indices() {
            let r = &self.roots[i];
            axpy(&mut rho, 0.5 * f64::from(r.multiplicity), &r.coords);
        }
        rho
    }

    /// `true` iff `α + β` is a root.
    pub(crate) fn sum_index(&self, i: usize, j: usize) -> Option<usize> {
        self.find(&add(&self.roots[i].coords, &self.roots[j].coords))
    }

    pub(crate) fn difference_index(&self, i: usize, j: usize) -> Option<usize> {
        self.find(&sub(&self.roots[i].coords, &self.roots[j].coords))
    }

    /// Reflection `s_α(v) = v − ⟨v, H_α⟩ α`.
    pub fn reflect(&self, alpha: usize, v: &[f64]) -> Vec<f64> {
        let c = dot(v, &self.coroots[alpha]);
        sub(v, &scale(&self.roots[alpha].coords, c))
    }
}

/// `H_α = 2α/⟨α, α⟩`, the element of `a` with `α(H_α) = 2`.
pub fn coroot(rs: &RootSystem, alpha: &RootVector) -> Result<Vec<f64>, RootSystemError> {
    let i = rs
        .find(&alpha.coords)
        .ok_or_else(|| RootSystemError::NotARoot(alpha.coords.clone()))?;
    Ok(rs.coroot_of(i).to_vec())
}

/// Killing-orthogonal splitting `X = X_c + X_b` with `X_c ∈ c = span{H_1, …, H_r}`.
pub fn cb_split(rs: &RootSystem, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    // Gram-Schmidt on the cascade coroots (orthogonal already for a genuine
    // cascade, but this keeps the projection exact for any input).
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for h in rs.gamma_coroots() {
        let mut u = h.clone();
        for b in &basis {
            let c = dot(&u, b);
            axpy(&mut u, -c, b);
        }
        let n = norm(&u);
        if n > ROOT_TOL {
            basis.push(scale(&u, 1.0 / n));
        }
    }
    let mut xc = vec![0.0; x.len()];
    for b in &basis {
        axpy(&mut xc, dot(x, b), b);
    }
    let xb = sub(x, &xc);
    (xc, xb)
}

/// A positive system `R ⊂ Δ`, stored as a membership mask over root indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveSystem {
    members: Vec<bool>,
}

impl PositiveSystem {
    /// The system `Δ⁺` fixed by the root system.
    pub fn standard(rs: &RootSystem) -> Self {
        PositiveSystem { members: rs.positive.clone() }
    }

    /// `−Δ_n⁺ ∪ Δ_k⁺`, the system whose auxiliary c-function is `c₀`.
    pub fn noncompact_flipped(rs: &RootSystem) -> Self {
        let members = (0..rs.len())
            .map(|i| rs.positive[i] == rs.roots[i].compact)
            .collect();
        PositiveSystem { members }
    }

    /// `{α : α(v) > 0}` for a regular `v`.
    pub fn from_regular_vector(rs: &RootSystem, v: &[f64]) -> Result<Self, RootSystemError> {
        if v.len() != rs.rank {
            return Err(RootSystemError::Malformed("vector has wrong dimension".into()));
        }
        let scale_v = norm(v).max(f64::MIN_POSITIVE);
        if rs.roots.iter().any(|a| a.eval(v).abs() <= 1e-12 * scale_v) {
            return Err(RootSystemError::Irregular(v.to_vec()));
        }
        Ok(PositiveSystem { members: rs.roots.iter().map(|a| a.eval(v) > 0.0).collect() })
    }

    /// Arbitrary subset of root indices; checked when used.
    pub fn from_indices(rs: &RootSystem, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut members = vec![false; rs.len()];
        for i in indices {
            if i < members.len() {
                members[i] = true;
            }
        }
        PositiveSystem { members }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.get(i).copied().unwrap_or(false)
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&i| self.members[i]).collect()
    }

    /// Checks `R ⊔ −R = Δ` and closure under addition within `Δ`.
    pub fn check(&self, rs: &RootSystem) -> Result<(), RootSystemError> {
        if self.members.len() != rs.len() {
            return Err(RootSystemError::NotPositiveSystem("mask size mismatch".into()));
        }
        for i in 0..rs.len() {
            if self.members[i] == self.members[rs.negation_of(i)] {
                return Err(RootSystemError::NotPositiveSystem(format!(
                    "exactly one of ±{:?} must belong to R",
                    rs.roots[i].coords
                )));
            }
        }
        let idx = self.indices();
        for &i in &idx {
            for &j in &idx {
                if let Some(k) = rs.sum_index(i, j) {
                    if !self.members[k] {
                        return Err(RootSystemError::NotPositiveSystem(format!(
                            "not closed: {:?} + {:?}",
                            rs.roots[i].coords, rs.roots[j].coords
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Indices of the simple roots of `R`: members that are not a sum of two
/// members. Non-compact roots come first, then index order.
pub fn simple_root_indices(rs: &RootSystem, r: &PositiveSystem) -> Result<Vec<usize>, RootSystemError> {
    r.check(rs)?;
    let idx = r.indices();
    let decomposable: BTreeSet<usize> = idx
        .iter()
        .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
        .filter_map(|(i, j)| rs.sum_index(i, j))
        .collect();
    let mut simple: Vec<usize> = idx.into_iter().filter(|i| !decomposable.contains(i)).collect();
    simple.sort_by_key(|&i| (rs.roots[i].compact, i));
    Ok(simple)
}

/// The simple system of `R` as root vectors.
pub fn simple_roots(rs: &RootSystem, r: &PositiveSystem) -> Result<Vec<RootVector>, RootSystemError> {
    Ok(simple_root_indices(rs, r)?
        .into_iter()
        .map(|i| rs.roots[i].clone())
        .collect())
}

/// Whether `R` has a simple root lying in `Δ_n⁺`.
///
/// For every positive system with `R ∩ Δ_n⁺ ≠ ∅` this is true, which is what
/// lets the non-compact factors be split off first.
pub fn has_simple_noncompact(rs: &RootSystem, r: &PositiveSystem) -> Result<bool, RootSystemError> {
    Ok(simple_root_indices(rs, r)?
        .into_iter()
        .any(|i| rs.positive[i] && !rs.roots[i].compact))
}
