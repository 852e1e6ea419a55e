//! c-functions of non-compactly causal (NCC) symmetric spaces.
//!
//! The crate is split into four layers:
//!
//! * [`rootsys`] builds restricted root systems in Euclidean coordinates and
//!   provides the combinatorics around them: compact/non-compact split,
//!   strongly orthogonal cascades, coroots, cones, signatures and a structure
//!   validator.
//! * [`catalog`] loads named spaces from small TOML data files.
//! * [`cfunc`] evaluates the rank-one Beta factors and their products
//!   `c_Ω`, `c₀`, `c_R` and `c = c₀·c_Ω` as meromorphic functions of `λ`.
//! * [`oracle`] evaluates the defining integrals directly in matrix models of
//!   `SL(2,ℝ)` and `Sp(4,ℝ)`, independently of the Beta-function formulas.

pub mod catalog;
pub mod cfunc;
pub mod oracle;
pub mod rootsys;

mod vecops;

pub use catalog::{Catalog, CatalogEntry, CatalogError, LoadedEntry, Realization};
pub use cfunc::{CValue, Functional, MeroValue, PoleSheet};
pub use rootsys::{
    CartanType, Multiplicities, PositiveSystem, RootSystem, RootSystemError, RootVector,
};
