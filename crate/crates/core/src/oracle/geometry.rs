//! Convex-geometry checks on `Ω ⊂ Sym(2,ℝ)` for the `Sp(4,ℝ)` model.
//!
//! `n_n⁻ = Sym(2,ℝ)` splits into the root spaces of `−2e₁` (the `X₁₁` entry),
//! `−2e₂` (`X₂₂`) and `−(e₁+e₂)` (`X₁₂`). `exp(ad Y)`, `Y ∈ a`, acts on them by
//! `e^{−α(Y)}`, i.e. `X ↦ D X D` with `D = diag(e^{−y₁}, e^{−y₂})`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::montecarlo::sample_omega;
use super::sp4::Sym2;
use crate::rootsys::{all_signatures, cone_member, Cone, ConeQuery, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeometryReport {
    pub check: &'static str,
    pub tested: usize,
    pub passed: usize,
    /// A few failing points, for diagnostics.
    pub counterexamples: Vec<String>,
}

impl GeometryReport {
    fn new(check: &'static str) -> Self {
        GeometryReport { check, tested: 0, passed: 0, counterexamples: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.tested += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexamples.len() < 5 {
            self.counterexamples.push(what());
        }
    }

    pub fn failures(&self) -> usize {
        self.tested - self.passed
    }

    pub fn all_passed(&self) -> bool {
        self.tested > 0 && self.passed == self.tested
    }
}

/// Orthogonal projections of `X` onto the root spaces of `−2e₁`, `−2e₂` and
/// `−(e₁+e₂)`.
pub fn root_projections(x: &Sym2) -> [Sym2; 3] {
    [Sym2::diag(x.x11, 0.0), Sym2::diag(0.0, x.x22), Sym2::new(0.0, x.x12, 0.0)]
}

fn in_omega(x: &Sym2) -> bool {
    x.spectral_radius() < 1.0
}

// At least `samples` points of Ω, drawn in batches from the sampling box.
fn omega_points(samples: usize, seed: u64) -> Vec<Sym2> {
    let mut pts = Vec::with_capacity(samples);
    let mut batch = 0;
    while pts.len() < samples {
        let need = samples - pts.len();
        pts.extend(sample_omega(2 * need + 16, seed.wrapping_add(batch)).into_iter().take(need));
        batch += 1;
    }
    pts
}

/// Draws `samples` points of `Ω` and checks that every root-space projection
/// stays in `Ω`.
pub fn projection_property_check(samples: usize, seed: u64) -> GeometryReport {
    let mut report = GeometryReport::new("projection");
    for x in omega_points(samples, seed) {
        let ok = root_projections(&x).iter().all(in_omega);
        report.record(ok, || format!("{x:?}"));
    }
    report
}

/// `e^{ad Y}.Ω ⊆ Ω` for random `Y ∈ C_max`, with `C_max` decided by the cone
/// test on `rs` (the `sp4r-gl2r` entry).
pub fn contraction_check(rs: &RootSystem, samples: usize, seed: u64) -> GeometryReport {
    let mut report = GeometryReport::new("contraction");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for x in omega_points(samples, seed ^ 0x5eed) {
        // Half of the draws come from a box around C_max so the cone test is
        // exercised on both sides.
        let y = [rng.random_range(-0.5..3.0), rng.random_range(-0.5..3.0)];
        if !cone_member(rs, &ConeQuery { point: y.to_vec(), cone: Cone::Max }) {
            continue;
        }
        let (d1, d2) = ((-y[0]).exp(), (-y[1]).exp());
        let image = Sym2::new(d1 * d1 * x.x11, d1 * d2 * x.x12, d2 * d2 * x.x22);
        report.record(in_omega(&image), || format!("X = {x:?}, Y = {y:?}"));
    }
    report
}

/// For every signature `ε`, the root-space sign twist
/// `X ↦ (ε(2e₁)X₁₁, ε(2e₂)X₂₂, ε(e₁+e₂)X₁₂)` maps `Ω` into itself. (With
/// `Π = {2e₁, e₂−e₁}` the twist is `±S X S`, `S = diag(1, ±1)`.)
pub fn signature_invariance_check(rs: &RootSystem, samples: usize, seed: u64) -> GeometryReport {
    let mut report = GeometryReport::new("signature-invariance");
    let idx = |c: &[f64]| rs.find(c).expect("sp4r-gl2r roots");
    let (r11, r22, r12) = (idx(&[2.0, 0.0]), idx(&[0.0, 2.0]), idx(&[1.0, 1.0]));
    let signatures = match all_signatures(rs) {
        Ok(s) => s,
        Err(e) => {
            report.record(false, || e.to_string());
            return report;
        }
    };
    let pts = omega_points(samples, seed);
    for sig in &signatures {
        let (s11, s22, s12) = (sig.value(r11).as_f64(), sig.value(r22).as_f64(), sig.value(r12).as_f64());
        for x in &pts {
            let image = Sym2::new(s11 * x.x11, s12 * x.x12, s22 * x.x22);
            report.record(in_omega(&image), || format!("ε = ({s11}, {s22}, {s12}), X = {x:?}"));
        }
    }
    report
}
