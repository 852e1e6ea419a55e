//! Beta-function product formulas for `c_Ω`, `c₀`, `c_R` and `c = c₀·c_Ω`.
//!
//! Every factor is a function of the single complex number `λ(H_α)`:
//!
//! * non-compact `α ∈ Δ_n⁺`: `2^{m_α−1} B(m_α/2, −λ(H_α)/2 − m_α/2 + 1)`,
//!   convergent for `Re λ(H_α) < 2 − m_α`;
//! * compact `α ∈ Δ_k⁺`: `B(m_α/2, λ(H_α)/2)`, convergent for `Re λ(H_α) > 0`.
//!
//! Products carry a pole as soon as one factor does. No cancellation between
//! factors is attempted.

mod gamma;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::rootsys::{PositiveSystem, RootSystem, RootSystemError, RootVector};
use crate::vecops::dot;

pub use gamma::{beta, is_nonpositive_integer, ln_gamma, MeroValue, POLE_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CFuncError {
    #[error("{0:?} is not a non-compact positive root")]
    NotNoncompactPositive(Vec<f64>),
    #[error("{0:?} is not a compact positive root")]
    NotCompactPositive(Vec<f64>),
    #[error("functional has {got} coordinates, rank is {rank}")]
    Dimension { got: usize, rank: usize },
    #[error("cannot solve for λ from coroot values: {0}")]
    Underdetermined(String),
    #[error(transparent)]
    Root(#[from] RootSystemError),
}

/// `λ = re + i·im ∈ a*_ℂ` in the root-system coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Functional {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl Functional {
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Self {
        assert_eq!(re.len(), im.len(), "real and imaginary parts differ in length");
        Functional { re, im }
    }

    pub fn real(re: Vec<f64>) -> Self {
        let im = vec![0.0; re.len()];
        Functional { re, im }
    }

    pub fn from_complex(z: &[Complex64]) -> Self {
        Functional { re: z.iter().map(|c| c.re).collect(), im: z.iter().map(|c| c.im).collect() }
    }

    pub fn dim(&self) -> usize {
        self.re.len()
    }

    /// `λ(H) = ⟨re, H⟩ + i⟨im, H⟩`.
    pub fn eval(&self, h: &[f64]) -> Complex64 {
        Complex64::new(dot(&self.re, h), dot(&self.im, h))
    }

    pub fn is_finite(&self) -> bool {
        self.re.iter().chain(&self.im).all(|v| v.is_finite())
    }

    fn check(&self, rs: &RootSystem) -> Result<(), CFuncError> {
        if self.dim() != rs.rank() || self.im.len() != rs.rank() {
            return Err(CFuncError::Dimension { got: self.dim(), rank: rs.rank() });
        }
        Ok(())
    }
}

/// The `λ` with prescribed values `λ(H_{γ_i}) = values[i]` on the cascade
/// coroots. Requires `Γ` to span `a*`.
pub fn functional_from_coroot_values(
    rs: &RootSystem,
    values: &[Complex64],
) -> Result<Functional, CFuncError> {
    let h = rs.gamma_coroots();
    if h.len() != rs.rank() {
        return Err(CFuncError::Underdetermined(format!(
            "the cascade spans a {}-dimensional subspace of a {}-dimensional a*",
            h.len(),
            rs.rank()
        )));
    }
    if values.len() != h.len() {
        return Err(CFuncError::Dimension { got: values.len(), rank: h.len() });
    }
    let n = h.len();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| h[i][j]);
    let lu = m.lu();
    let solve = |rhs: Vec<f64>| {
        lu.solve(&nalgebra::DVector::from_vec(rhs))
            .map(|v| v.iter().copied().collect::<Vec<f64>>())
            .ok_or_else(|| CFuncError::Underdetermined("singular coroot matrix".into()))
    };
    let re = solve(values.iter().map(|v| v.re).collect())?;
    let im = solve(values.iter().map(|v| v.im).collect())?;
    Ok(Functional { re, im })
}

/// Result of evaluating a c-function at one `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CValue {
    /// Value of the meromorphic continuation; `None` at a pole.
    pub value: Option<Complex64>,
    /// The defining integral converges at `λ`.
    pub in_domain: bool,
    pub pole: bool,
    /// The product was empty (for `c_Ω` this flags a non-NCC entry).
    pub empty_product: bool,
}

impl CValue {
    fn one() -> Self {
        CValue { value: Some(Complex64::new(1.0, 0.0)), in_domain: true, pole: false, empty_product: true }
    }

    fn factor(value: MeroValue, in_domain: bool) -> Self {
        match value {
            MeroValue::Finite(v) => CValue { value: Some(v), in_domain, pole: false, empty_product: false },
            MeroValue::Pole => CValue { value: None, in_domain: false, pole: true, empty_product: false },
        }
    }

    /// Product of two values: pole if either is, domains intersected.
    pub fn times(self, other: CValue) -> CValue {
        let pole = self.pole || other.pole;
        CValue {
            value: if pole { None } else { Some(self.value.unwrap_or_default() * other.value.unwrap_or_default()) },
            in_domain: self.in_domain && other.in_domain && !pole,
            pole,
            empty_product: self.empty_product && other.empty_product,
        }
    }
}

fn product(factors: impl IntoIterator<Item = CValue>) -> CValue {
    factors.into_iter().fold(CValue::one(), CValue::times)
}

/// `ρ = ½ Σ_{α∈Δ⁺} m_α α`.
pub fn rho(rs: &RootSystem) -> Functional {
    Functional::real(rs.rho())
}

/// Non-compact rank-one factor as a function of `z = λ(H_α)`.
pub fn noncompact_factor(m: u32, z: Complex64) -> CValue {
    let mh = f64::from(m) / 2.0;
    let b = beta(Complex64::new(mh, 0.0), -z / 2.0 - mh + 1.0);
    let value = match b {
        MeroValue::Finite(v) => MeroValue::Finite(v * 2f64.powi(m as i32 - 1)),
        MeroValue::Pole => MeroValue::Pole,
    };
    CValue::factor(value, z.re < 2.0 - f64::from(m))
}

/// Compact rank-one factor as a function of `z = λ(H_α)`.
pub fn compact_factor(m: u32, z: Complex64) -> CValue {
    let b = beta(Complex64::new(f64::from(m) / 2.0, 0.0), z / 2.0);
    CValue::factor(b, z.re > 0.0)
}

fn index_of(rs: &RootSystem, alpha: &RootVector) -> Result<usize, RootSystemError> {
    rs.find(&alpha.coords).ok_or_else(|| RootSystemError::NotARoot(alpha.coords.clone()))
}

fn factor_at(rs: &RootSystem, lambda: &Functional, i: usize) -> CValue {
    let a = rs.root(i);
    let z = lambda.eval(rs.coroot_of(i));
    if a.compact {
        compact_factor(a.multiplicity, z)
    } else {
        noncompact_factor(a.multiplicity, z)
    }
}

/// `c_α(λ)` for `α ∈ Δ_n⁺`.
pub fn c_alpha_noncompact(rs: &RootSystem, lambda: &Functional, alpha: &RootVector) -> Result<CValue, CFuncError> {
    lambda.check(rs)?;
    let i = index_of(rs, alpha)?;
    if rs.root(i).compact || !rs.is_positive(i) {
        return Err(CFuncError::NotNoncompactPositive(alpha.coords.clone()));
    }
    Ok(factor_at(rs, lambda, i))
}

/// `c_α(λ)` for `α ∈ Δ_k⁺`.
pub fn c_alpha_compact(rs: &RootSystem, lambda: &Functional, alpha: &RootVector) -> Result<CValue, CFuncError> {
    lambda.check(rs)?;
    let i = index_of(rs, alpha)?;
    if !rs.root(i).compact || !rs.is_positive(i) {
        return Err(CFuncError::NotCompactPositive(alpha.coords.clone()));
    }
    Ok(factor_at(rs, lambda, i))
}

/// `c_R(λ) = Π_{α ∈ R ∩ Δ⁺} c_α(λ)`.
pub fn c_r(rs: &RootSystem, lambda: &Functional, r: &PositiveSystem) -> Result<CValue, CFuncError> {
    lambda.check(rs)?;
    r.check(rs)?;
    Ok(product(
        (0..rs.len())
            .filter(|&i| r.contains(i) && rs.is_positive(i))
            .map(|i| factor_at(rs, lambda, i)),
    ))
}

/// `c_Ω(λ) = Π_{α∈Δ_n⁺} c_α(λ)`.
pub fn c_omega(rs: &RootSystem, lambda: &Functional) -> Result<CValue, CFuncError> {
    lambda.check(rs)?;
    Ok(product(rs.noncompact_positive().into_iter().map(|i| factor_at(rs, lambda, i))))
}

/// `c₀(λ) = Π_{α∈Δ_k⁺} c_α(λ)`.
pub fn c_zero(rs: &RootSystem, lambda: &Functional) -> Result<CValue, CFuncError> {
    lambda.check(rs)?;
    Ok(product(rs.compact_positive().into_iter().map(|i| factor_at(rs, lambda, i))))
}

/// `c(λ) = c₀(λ)·c_Ω(λ)`.
pub fn c_full(rs: &RootSystem, lambda: &Functional) -> Result<CValue, CFuncError> {
    Ok(c_zero(rs, lambda)?.times(c_omega(rs, lambda)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Noncompact,
    Compact,
}

/// `{v_k = first + k·step : 0 ≤ k < count}`; `count = None` means infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleLevels {
    pub first: f64,
    pub step: f64,
    pub count: Option<usize>,
}

impl PoleLevels {
    pub fn level(&self, k: usize) -> Option<f64> {
        match self.count {
            Some(n) if k >= n => None,
            _ => Some(self.first + self.step * k as f64),
        }
    }
}

impl fmt::Display for PoleLevels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.count.unwrap_or(3).min(3);
        let vals: Vec<String> = (0..shown).map(|k| fmt_level(self.first + self.step * k as f64)).collect();
        match self.count {
            None => write!(f, "{{{}, …}}", vals.join(", ")),
            Some(n) if n <= 3 => write!(f, "{{{}}}", vals.join(", ")),
            Some(n) => write!(f, "{{{}, …, {}}}", vals.join(", "), fmt_level(self.first + self.step * (n - 1) as f64)),
        }
    }
}

fn fmt_level(v: f64) -> String {
    if v == v.round() {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// The hyperplanes `λ(H_α) = v_k` on which the factor of `α` has a pole.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleSheet {
    pub alpha: RootVector,
    pub kind: FactorKind,
    pub levels: PoleLevels,
}

impl fmt::Display for PoleSheet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.alpha.coords.iter().map(|x| format!("{x:.4}")).collect();
        let kind = match self.kind {
            FactorKind::Noncompact => "non-compact",
            FactorKind::Compact => "compact",
        };
        write!(f, "α = ({}), m = {}, {kind}: λ(H_α) ∈ {}", coords.join(", "), self.alpha.multiplicity, self.levels)
    }
}

/// One sheet family per positive root.
///
/// The second Beta argument runs through `0, −1, −2, …` along the family.
/// For even `m_α` the first argument `m_α/2` is a positive integer, so only
/// the first `m_α/2` of these are poles; beyond that `Γ(a+b)` cancels them.
pub fn pole_sheets(rs: &RootSystem) -> Vec<PoleSheet> {
    let mut out = Vec::new();
    for i in rs.noncompact_positive().into_iter().chain(rs.compact_positive()) {
        let a = rs.root(i).clone();
        let m = a.multiplicity;
        let count = m.is_multiple_of(2).then_some((m / 2) as usize);
        let (kind, levels) = if a.compact {
            (FactorKind::Compact, PoleLevels { first: 0.0, step: -2.0, count })
        } else {
            (FactorKind::Noncompact, PoleLevels { first: 2.0 - f64::from(m), step: 2.0, count })
        };
        out.push(PoleSheet { alpha: a, kind, levels });
    }
    out
}
