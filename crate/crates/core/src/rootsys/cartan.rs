use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{RootSystem, RootSystemError};
use crate::vecops::{approx_eq, scale};

/// Classical Cartan types. `BC` is accepted by the parser only so that it can
/// be rejected as non-reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    BC,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::B => "B",
            CartanType::C => "C",
            CartanType::D => "D",
            CartanType::BC => "BC",
        };
        f.write_str(s)
    }
}

impl FromStr for CartanType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "BC" => Ok(CartanType::BC),
            other => Err(format!("unknown Cartan type {other:?}")),
        }
    }
}

/// Multiplicities per root length. Simply laced types only carry `long`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Multiplicities {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub long: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub short: Option<u32>,
}

enum Length {
    Long,
    Short,
}

fn unit(rank: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; rank];
    v[i] = 1.0;
    v
}

fn pm_pairs(n: usize, out: &mut Vec<Vec<f64>>) {
    for i in 0..n {
        for j in (i + 1)..n {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; n];
                v[i] = si;
                v[j] = sj;
                out.push(v);
            }
        }
    }
}

// `e_i − e_j` in ℝ^{n+1}, written in the Helmert orthonormal basis of the
// sum-zero hyperplane so that the roots live in ℝ^n.
fn type_a(n: usize) -> Vec<Vec<f64>> {
    let helmert: Vec<Vec<f64>> = (1..=n)
        .map(|k| {
            let c = 1.0 / ((k * (k + 1)) as f64).sqrt();
            let mut u = vec![0.0; n + 1];
            for x in u.iter_mut().take(k) {
                *x = c;
            }
            u[k] = -(k as f64) * c;
            u
        })
        .collect();
    let mut roots = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            if i == j {
                continue;
            }
            let coords = helmert.iter().map(|u| u[i] - u[j]).collect();
            roots.push(coords);
        }
    }
    roots
}

fn roots_by_length(cartan: CartanType, n: usize) -> Vec<(Vec<f64>, Length)> {
    let mut out = Vec::new();
    match cartan {
        CartanType::A => {
            out.extend(type_a(n).into_iter().map(|v| (v, Length::Long)));
        }
        CartanType::B => {
            let mut long = Vec::new();
            pm_pairs(n, &mut long);
            out.extend(long.into_iter().map(|v| (v, Length::Long)));
            for i in 0..n {
                out.push((unit(n, i), Length::Short));
                out.push((scale(&unit(n, i), -1.0), Length::Short));
            }
        }
        CartanType::C => {
            let mut short = Vec::new();
            pm_pairs(n, &mut short);
            out.extend(short.into_iter().map(|v| (v, Length::Short)));
            for i in 0..n {
                out.push((scale(&unit(n, i), 2.0), Length::Long));
                out.push((scale(&unit(n, i), -2.0), Length::Long));
            }
        }
        CartanType::D => {
            let mut long = Vec::new();
            pm_pairs(n, &mut long);
            out.extend(long.into_iter().map(|v| (v, Length::Long)));
        }
        CartanType::BC => unreachable!("BC is rejected before root generation"),
    }
    out
}

/// Realizes the root system of the given classical type in `ℝ^rank`.
///
/// `x0` must satisfy `α(x0) ∈ {−1, 0, 1}` for every root. `x0 = 0` is
/// accepted: the result has `Δ_n = ∅` and is flagged as non-NCC by the
/// validator.
pub fn build_root_system(
    cartan: CartanType,
    rank: usize,
    mult: &Multiplicities,
    x0: Vec<f64>,
) -> Result<RootSystem, RootSystemError> {
    let min_rank = match cartan {
        CartanType::A | CartanType::C | CartanType::BC => 1,
        CartanType::B => 2,
        CartanType::D => 3,
    };
    if rank < min_rank {
        return Err(RootSystemError::BadRank { cartan: cartan.to_string(), rank });
    }
    if cartan == CartanType::BC {
        let mut e1 = vec![0.0; rank];
        e1[0] = 1.0;
        return Err(RootSystemError::NonReduced { root: e1 });
    }
    let has_short = matches!(cartan, CartanType::B) || (cartan == CartanType::C && rank >= 2);
    let long = match mult.long {
        Some(0) | None => {
            return Err(RootSystemError::InconsistentMultiplicity(
                "a positive long-root multiplicity is required".into(),
            ))
        }
        Some(m) => m,
    };
    let short = match (has_short, mult.short) {
        (true, Some(m)) if m > 0 => Some(m),
        (true, _) => {
            return Err(RootSystemError::InconsistentMultiplicity(format!(
                "type {cartan}{rank} has short roots and needs a positive short multiplicity"
            )))
        }
        (false, Some(_)) => {
            return Err(RootSystemError::InconsistentMultiplicity(format!(
                "type {cartan}{rank} has a single root length; drop the short multiplicity"
            )))
        }
        (false, None) => None,
    };

    let roots: Vec<(Vec<f64>, u32)> = roots_by_length(cartan, rank)
        .into_iter()
        .map(|(v, len)| match len {
            Length::Long => (v, long),
            Length::Short => (v, short.unwrap_or(long)),
        })
        .collect();
    let rs = RootSystem::from_roots(rank, roots, x0)?;
    if let Some(root) = first_doubled_root(&rs) {
        return Err(RootSystemError::NonReduced { root });
    }
    Ok(rs)
}

pub(crate) fn first_doubled_root(rs: &RootSystem) -> Option<Vec<f64>> {
    rs.roots().iter().find_map(|a| {
        let doubled = scale(&a.coords, 2.0);
        rs.roots()
            .iter()
            .any(|b| approx_eq(&b.coords, &doubled, 1e-9))
            .then(|| a.coords.clone())
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn sp4() -> RootSystem {
        build_root_system(
            CartanType::C,
            2,
            &Multiplicities { long: Some(1), short: Some(1) },
            vec![0.5, 0.5],
        )
        .unwrap()
    }

    pub(crate) fn rank_one() -> RootSystem {
        build_root_system(
            CartanType::A,
            1,
            &Multiplicities { long: Some(1), short: None },
            vec![std::f64::consts::FRAC_1_SQRT_2],
        )
        .unwrap()
    }

    fn coords_set(rs: &RootSystem, idx: &[usize]) -> Vec<Vec<f64>> {
        idx.iter().map(|&i| rs.root(i).coords.clone()).collect()
    }

    fn same_set(a: &[Vec<f64>], b: &[[f64; 2]]) -> bool {
        a.len() == b.len() && b.iter().all(|w| a.iter().any(|v| approx_eq(v, w, 1e-12)))
    }

    #[test]
    fn sp4_split() {
        let rs = sp4();
        assert_eq!(rs.len(), 8);
        assert!(same_set(
            &coords_set(&rs, &rs.noncompact_positive()),
            &[[2.0, 0.0], [0.0, 2.0], [1.0, 1.0]]
        ));
        assert!(same_set(
            &coords_set(&rs, &rs.compact_roots()),
            &[[1.0, -1.0], [-1.0, 1.0]]
        ));
    }

    #[test]
    fn rank_one_split() {
        let rs = rank_one();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs.noncompact_positive().len(), 1);
        assert!(rs.compact_roots().is_empty());
    }

    #[test]
    fn zero_x0_is_constructible() {
        let rs = build_root_system(
            CartanType::C,
            2,
            &Multiplicities { long: Some(1), short: Some(1) },
            vec![0.0, 0.0],
        )
        .unwrap();
        assert!(rs.noncompact_positive().is_empty());
        assert_eq!(rs.positive_indices().len(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        let m = Multiplicities { long: Some(1), short: Some(1) };
        assert!(matches!(
            build_root_system(CartanType::C, 2, &m, vec![0.3, 0.5]),
            Err(RootSystemError::BadX0 { .. })
        ));
        assert!(matches!(
            build_root_system(CartanType::BC, 2, &m, vec![0.0, 0.0]),
            Err(RootSystemError::NonReduced { .. })
        ));
        assert!(matches!(
            build_root_system(CartanType::A, 2, &m, vec![0.0, 0.0]),
            Err(RootSystemError::InconsistentMultiplicity(_))
        ));
        let no_short = Multiplicities { long: Some(1), short: None };
        assert!(matches!(
            build_root_system(CartanType::B, 3, &no_short, vec![1.0, 0.0, 0.0]),
            Err(RootSystemError::InconsistentMultiplicity(_))
        ));
        assert!(matches!(
            build_root_system(CartanType::D, 2, &no_short, vec![0.0, 0.0]),
            Err(RootSystemError::BadRank { .. })
        ));
    }

    #[test]
    fn type_a_has_expected_geometry() {
        let rs = build_root_system(
            CartanType::A,
            3,
            &Multiplicities { long: Some(2), short: None },
            vec![0.0; 3],
        )
        .unwrap();
        assert_eq!(rs.len(), 12);
        for a in rs.roots() {
            assert!((a.norm2() - 2.0).abs() < 1e-12);
        }
    }
}
