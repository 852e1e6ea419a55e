use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::cartan::first_doubled_root;
use super::cone::{cone_member, Cone, ConeQuery};
use super::{cb_split, RootSystem, ROOT_TOL};
use crate::vecops::{add, approx_eq, axpy, neg, norm, scale, sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// A violated hard check means the data are not an NCC root system.
    Hard,
    /// Informational; does not block loading.
    Soft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The hypothesis of the check is empty for this root system.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureCheck {
    pub id: &'static str,
    pub title: &'static str,
    pub severity: Severity,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<StructureCheck>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn hard_failures(&self) -> Vec<&StructureCheck> {
        self.checks
            .iter()
            .filter(|c| c.severity == Severity::Hard && c.status == CheckStatus::Fail)
            .collect()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&StructureCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Vacuous => "vacuous",
            };
            let sev = match c.severity {
                Severity::Hard => "",
                Severity::Soft => " (soft)",
            };
            write!(f, "{:<5} {:<8} {}{}", format!("({})", c.id), status, c.title, sev)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

struct Builder {
    checks: Vec<StructureCheck>,
}

impl Builder {
    fn push(&mut self, id: &'static str, title: &'static str, severity: Severity, outcome: Outcome) {
        let (status, detail) = match outcome {
            Outcome::Pass => (CheckStatus::Pass, String::new()),
            Outcome::Fail(d) => (CheckStatus::Fail, d),
            Outcome::Vacuous(d) => (CheckStatus::Vacuous, d.to_string()),
        };
        self.checks.push(StructureCheck { id, title, severity, status, detail });
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Vacuous(&'static str),
}

fn outcome(failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail(failures.join("; "))
    }
}

fn fmt_root(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("({})", parts.join(", "))
}

/// Runs the structural checks that every NCC root system must satisfy.
///
/// Orbit checks use the reflection group `W(Δ_k)` generated by the compact
/// roots as a stand-in for the small Weyl group; this is noted in the report.
pub fn validate_structure(rs: &RootSystem) -> ValidationReport {
    let mut b = Builder { checks: Vec::new() };
    let mut notes = vec![
        "orbit check (b) uses the reflection group generated by the compact roots".to_string(),
    ];
    let np = rs.noncompact_positive();
    let gamma: Vec<Vec<f64>> = rs.gamma_indices().iter().map(|&g| rs.root(g).coords.clone()).collect();
    let empty = np.is_empty();

    // (a)
    b.push(
        "a",
        "root system is reduced",
        Severity::Hard,
        match first_doubled_root(rs) {
            None => Outcome::Pass,
            Some(r) => Outcome::Fail(format!("both α and 2α occur for α = {}", fmt_root(&r))),
        },
    );

    // (b)
    let long_np: Vec<usize> = np.iter().copied().filter(|&i| rs.is_long(i)).collect();
    b.push(
        "b",
        "long roots of Δ_n⁺ form one W(Δ_k)-orbit",
        Severity::Hard,
        if long_np.is_empty() {
            Outcome::Vacuous("no long non-compact roots")
        } else {
            let orbit = compact_orbit(rs, long_np[0]);
            outcome(
                long_np
                    .iter()
                    .filter(|i| !orbit.contains(i))
                    .map(|&i| format!("{} not conjugate to {}", fmt_root(&rs.root(i).coords), fmt_root(&rs.root(long_np[0]).coords)))
                    .collect(),
            )
        },
    );

    // (c)
    let short_np: Vec<usize> = np.iter().copied().filter(|&i| !rs.is_long(i)).collect();
    b.push(
        "c",
        "Δ_{n,s}⁺ = {½(γ_i+γ_j) : i<j}",
        Severity::Hard,
        if short_np.is_empty() {
            Outcome::Vacuous("no short non-compact roots")
        } else {
            let mut expected = Vec::new();
            for i in 0..gamma.len() {
                for j in (i + 1)..gamma.len() {
                    expected.push(scale(&add(&gamma[i], &gamma[j]), 0.5));
                }
            }
            let mut fails = Vec::new();
            for &i in &short_np {
                let c = &rs.root(i).coords;
                if !expected.iter().any(|e| approx_eq(e, c, 1e-9)) {
                    fails.push(format!("{} is not a half-sum of cascade roots", fmt_root(c)));
                }
            }
            for e in &expected {
                if !short_np.iter().any(|&i| approx_eq(&rs.root(i).coords, e, 1e-9)) {
                    fails.push(format!("{} is missing from Δ_n⁺", fmt_root(e)));
                }
            }
            outcome(fails)
        },
    );

    // (d)
    b.push(
        "d",
        "restrictions to c follow the cascade pattern",
        Severity::Hard,
        if gamma.is_empty() {
            Outcome::Vacuous("empty cascade")
        } else {
            outcome(restriction_failures(rs, &gamma))
        },
    );

    // (e)
    b.push(
        "e",
        "simple compact roots have the cascade shape",
        Severity::Hard,
        if short_np.is_empty() {
            Outcome::Vacuous("no short non-compact roots")
        } else {
            outcome(compact_simple_failures(rs, &gamma))
        },
    );

    // (f)
    let mut bad_x0 = Vec::new();
    for a in rs.roots() {
        let v = a.eval(rs.x0());
        if (v - v.round()).abs() > ROOT_TOL || v.round().abs() > 1.0 {
            bad_x0.push(format!("α(X₀) = {v} at {}", fmt_root(&a.coords)));
        }
    }
    b.push("f1", "α(X₀) ∈ {−1, 0, 1}", Severity::Hard, outcome(bad_x0));
    b.push(
        "f2",
        "Δ_n⁺ is non-empty",
        Severity::Soft,
        if empty {
            Outcome::Fail("no non-compact roots: not an NCC root system".into())
        } else {
            Outcome::Pass
        },
    );
    if empty {
        notes.push("Δ_n = ∅: Riemannian limit, only c₀ is meaningful".into());
    }

    // (g)
    b.push(
        "g",
        "Γ long, non-compact, strongly orthogonal",
        Severity::Hard,
        if empty {
            Outcome::Vacuous("empty cascade")
        } else {
            let g = rs.gamma_indices();
            let mut fails = Vec::new();
            for (k, &i) in g.iter().enumerate() {
                if !rs.is_long(i) || rs.root(i).compact || !rs.is_positive(i) {
                    fails.push(format!("γ_{} = {} is not a long root of Δ_n⁺", k + 1, fmt_root(&rs.root(i).coords)));
                }
                for &j in &g[k + 1..] {
                    if rs.sum_index(i, j).is_some() || rs.difference_index(i, j).is_some() {
                        fails.push(format!(
                            "{} and {} are not strongly orthogonal",
                            fmt_root(&rs.root(i).coords),
                            fmt_root(&rs.root(j).coords)
                        ));
                    }
                }
            }
            outcome(fails)
        },
    );

    // (h)
    b.push(
        "h",
        "X₀ᶜ = ½ΣH_i and X₀ᵇ, X₀ᶜ ∈ C_max",
        Severity::Hard,
        if empty {
            Outcome::Vacuous("empty cascade")
        } else {
            let (xc, xb) = cb_split(rs, rs.x0());
            let mut half = vec![0.0; rs.rank()];
            for h in rs.gamma_coroots() {
                axpy(&mut half, 0.5, &h);
            }
            let mut fails = Vec::new();
            if !approx_eq(&xc, &half, 1e-9) {
                fails.push(format!("X₀ᶜ = {} but ½ΣH_i = {}", fmt_root(&xc), fmt_root(&half)));
            }
            for (name, p) in [("X₀ᵇ", xb), ("X₀ᶜ", xc)] {
                if !cone_member(rs, &ConeQuery { point: p, cone: Cone::Max }) {
                    fails.push(format!("{name} ∉ C_max"));
                }
            }
            outcome(fails)
        },
    );

    // (i)
    b.push(
        "i",
        "C_min ⊆ C_max",
        Severity::Hard,
        if empty {
            Outcome::Vacuous("C_min = {0}")
        } else {
            outcome(
                np.iter()
                    .filter(|&&i| {
                        !cone_member(rs, &ConeQuery { point: rs.coroot_of(i).to_vec(), cone: Cone::Max })
                    })
                    .map(|&i| format!("H_α ∉ C_max for α = {}", fmt_root(&rs.root(i).coords)))
                    .collect(),
            )
        },
    );

    ValidationReport { checks: b.checks, notes }
}

fn compact_orbit(rs: &RootSystem, start: usize) -> BTreeSet<usize> {
    let compact = rs.compact_roots();
    let mut seen = BTreeSet::from([start]);
    let mut queue = vec![start];
    while let Some(i) = queue.pop() {
        for &k in &compact {
            let image = rs.reflect(k, &rs.root(i).coords);
            if let Some(j) = rs.find(&image) {
                if seen.insert(j) {
                    queue.push(j);
                }
            }
        }
    }
    seen
}

fn restriction_failures(rs: &RootSystem, gamma: &[Vec<f64>]) -> Vec<String> {
    let r = gamma.len();
    let mut noncompact_pattern = Vec::new();
    let mut compact_pattern = Vec::new();
    for i in 0..r {
        noncompact_pattern.push(scale(&gamma[i], 0.5));
        compact_pattern.push(scale(&gamma[i], -0.5));
        for j in 0..r {
            noncompact_pattern.push(scale(&add(&gamma[i], &gamma[j]), 0.5));
            if j < i {
                compact_pattern.push(scale(&sub(&gamma[i], &gamma[j]), 0.5));
            }
        }
    }
    let mut fails = Vec::new();
    for i in rs.positive_indices() {
        let a = rs.root(i);
        let (restricted, _) = cb_split(rs, &a.coords);
        let ok = if a.compact {
            norm(&restricted) <= 1e-9 || compact_pattern.iter().any(|p| approx_eq(p, &restricted, 1e-9))
        } else {
            noncompact_pattern.iter().any(|p| approx_eq(p, &restricted, 1e-9))
        };
        if !ok {
            fails.push(format!(
                "{} restricts to {} on c",
                fmt_root(&a.coords),
                fmt_root(&restricted)
            ));
        }
    }
    fails
}

fn compact_simple_failures(rs: &RootSystem, gamma: &[Vec<f64>]) -> Vec<String> {
    let kp = rs.compact_positive();
    let sums: BTreeSet<usize> = kp
        .iter()
        .flat_map(|&i| kp.iter().map(move |&j| (i, j)))
        .filter_map(|(i, j)| rs.sum_index(i, j))
        .collect();
    let simple: Vec<usize> = kp.iter().copied().filter(|i| !sums.contains(i)).collect();
    let r = gamma.len();
    let mut fails = Vec::new();
    for i in 0..r.saturating_sub(1) {
        let want = scale(&sub(&gamma[i + 1], &gamma[i]), 0.5);
        if !simple.iter().any(|&k| approx_eq(&rs.root(k).coords, &want, 1e-9)) {
            fails.push(format!("½(γ_{}−γ_{}) = {} is not simple in Δ_k⁺", i + 2, i + 1, fmt_root(&want)));
        }
    }
    let minus_half_last = neg(&scale(&gamma[r - 1], 0.5));
    for &k in &simple {
        let coords = &rs.root(k).coords;
        if (0..r.saturating_sub(1))
            .any(|i| approx_eq(coords, &scale(&sub(&gamma[i + 1], &gamma[i]), 0.5), 1e-9))
        {
            continue;
        }
        let (restricted, _) = cb_split(rs, coords);
        if norm(&restricted) > 1e-9 && !approx_eq(&restricted, &minus_half_last, 1e-9) {
            fails.push(format!(
                "simple compact root {} restricts to {} on c",
                fmt_root(coords),
                fmt_root(&restricted)
            ));
        }
    }
    fails
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::cartan::tests::{rank_one, sp4};
    use crate::rootsys::{build_root_system, CartanType, Multiplicities};

    #[test]
    fn sp4_passes_everything() {
        let report = validate_structure(&sp4());
        assert!(report.all_passed(), "{report}");
        for id in ["a", "b", "c", "d", "e", "f1", "f2", "g", "h", "i"] {
            assert_eq!(report.get(id).unwrap().status, CheckStatus::Pass, "{id}");
        }
    }

    #[test]
    fn rank_one_has_vacuous_short_checks() {
        let report = validate_structure(&rank_one());
        assert!(report.all_passed(), "{report}");
        for id in ["c", "e"] {
            assert_eq!(report.get(id).unwrap().status, CheckStatus::Vacuous, "{id}");
        }
        for id in ["a", "b", "d", "f1", "f2"] {
            assert_eq!(report.get(id).unwrap().status, CheckStatus::Pass, "{id}");
        }
    }

    #[test]
    fn doubled_root_fails_reducedness() {
        let rs = rank_one();
        let doubled = scale(&rs.root(0).coords, 2.0);
        // 2α(X₀) = 2 would be rejected, so inject into a copy with X₀ rescaled.
        let rs = RootSystem::from_roots(
            1,
            vec![(rs.root(0).coords.clone(), 1), (neg(&rs.root(0).coords), 1)],
            vec![0.0],
        )
        .unwrap()
        .with_extra_root(doubled, 1)
        .unwrap();
        let report = validate_structure(&rs);
        assert_eq!(report.get("a").unwrap().status, CheckStatus::Fail);
        assert!(!report.hard_failures().is_empty());
    }

    #[test]
    fn empty_noncompact_is_a_soft_failure() {
        let rs = build_root_system(
            CartanType::C,
            2,
            &Multiplicities { long: Some(1), short: Some(1) },
            vec![0.0, 0.0],
        )
        .unwrap();
        let report = validate_structure(&rs);
        assert_eq!(report.get("f2").unwrap().status, CheckStatus::Fail);
        assert!(report.hard_failures().is_empty(), "{report}");
    }

    #[test]
    fn higher_rank_symplectic_passes() {
        for n in [3, 4] {
            let rs = build_root_system(
                CartanType::C,
                n,
                &Multiplicities { long: Some(1), short: Some(1) },
                vec![0.5; n],
            )
            .unwrap();
            let report = validate_structure(&rs);
            assert!(report.all_passed(), "C{n}\n{report}");
        }
    }
}
