use std::collections::BTreeMap;
use std::ops::Mul;

use nalgebra::{DMatrix, DVector};

use super::{simple_root_indices, PositiveSystem, RootSystem, RootSystemError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A signature `ε : Δ → {±1}`, the multiplicative extension of its values on
/// the simple roots of `Δ⁺`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    simple: Vec<usize>,
    assignment: Vec<Sign>,
    values: Vec<Sign>,
}

impl Signature {
    /// Simple roots (root indices) in the order used by [`Signature::assignment`].
    pub fn simple_roots(&self) -> &[usize] {
        &self.simple
    }

    pub fn assignment(&self) -> &[Sign] {
        &self.assignment
    }

    /// `ε(α)` for the root with index `i`.
    pub fn value(&self, i: usize) -> Sign {
        self.values[i]
    }

    pub fn values(&self) -> &[Sign] {
        &self.values
    }

    /// Lists every violation of `ε(α) = ε(−α)` and `ε(α+β) = ε(α)ε(β)`.
    pub fn axiom_violations(&self, rs: &RootSystem) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..rs.len() {
            if self.values[i] != self.values[rs.negation_of(i)] {
                out.push(format!("(S1) fails at {:?}", rs.root(i).coords));
            }
            for j in 0..rs.len() {
                if let Some(k) = rs.sum_index(i, j) {
                    if self.values[k] != self.values[i] * self.values[j] {
                        out.push(format!(
                            "(S2) fails at {:?} + {:?}",
                            rs.root(i).coords,
                            rs.root(j).coords
                        ));
                    }
                }
            }
        }
        out
    }
}

// Integer coordinates of every root in the basis `simple`.
fn simple_coordinates(rs: &RootSystem, simple: &[usize]) -> Result<Vec<Vec<i64>>, RootSystemError> {
    let cols: Vec<DVector<f64>> = simple
        .iter()
        .map(|&i| DVector::from_column_slice(&rs.root(i).coords))
        .collect();
    let basis = DMatrix::from_columns(&cols);
    let svd = basis.clone().svd(true, true);
    rs.roots()
        .iter()
        .map(|a| {
            let rhs = DVector::from_column_slice(&a.coords);
            let sol = svd
                .solve(&rhs, 1e-12)
                .map_err(|e| RootSystemError::Malformed(e.to_string()))?;
            let ints: Vec<i64> = sol.iter().map(|c| c.round() as i64).collect();
            let back: DVector<f64> =
                &basis * DVector::from_iterator(ints.len(), ints.iter().map(|&c| c as f64));
            if (back - rhs).norm() > 1e-8 {
                return Err(RootSystemError::Malformed(format!(
                    "{:?} is not an integral combination of simple roots",
                    a.coords
                )));
            }
            Ok(ints)
        })
        .collect()
}

/// Extends an assignment on the simple roots of `Δ⁺` (keyed by root index) to
/// the signature `ε(±Σ nᵢαᵢ) = Π εᵢ^{nᵢ}`.
pub fn make_signature(
    rs: &RootSystem,
    assignment: &BTreeMap<usize, Sign>,
) -> Result<Signature, RootSystemError> {
    let simple = simple_root_indices(rs, &PositiveSystem::standard(rs))?;
    if let Some(&extra) = assignment.keys().find(|k| !simple.contains(k)) {
        return Err(RootSystemError::NotASimpleRoot(extra));
    }
    let missing = simple.iter().filter(|i| !assignment.contains_key(i)).count();
    if missing > 0 {
        return Err(RootSystemError::IncompleteAssignment { missing });
    }
    let signs: Vec<Sign> = simple.iter().map(|i| assignment[i]).collect();
    let coords = simple_coordinates(rs, &simple)?;
    let values = coords
        .iter()
        .map(|n| {
            n.iter().zip(&signs).fold(Sign::Plus, |acc, (&k, &s)| {
                if k.unsigned_abs() % 2 == 1 {
                    acc * s
                } else {
                    acc
                }
            })
        })
        .collect();
    Ok(Signature { simple, assignment: signs, values })
}

/// All `2^|Π|` signatures, in binary order of the assignment (bit set → `−1`).
pub fn all_signatures(rs: &RootSystem) -> Result<Vec<Signature>, RootSystemError> {
    let simple = simple_root_indices(rs, &PositiveSystem::standard(rs))?;
    (0u64..(1u64 << simple.len()))
        .map(|mask| {
            let assignment = simple
                .iter()
                .enumerate()
                .map(|(b, &i)| (i, if mask >> b & 1 == 1 { Sign::Minus } else { Sign::Plus }))
                .collect();
            make_signature(rs, &assignment)
        })
        .collect()
}
