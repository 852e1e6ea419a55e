//! `cfn verify` suites. Each returns a JSON report whose `passed` field
//! decides the exit code.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use cfn_core::catalog::Catalog;
use cfn_core::cfunc::{c_omega, compact_factor, noncompact_factor, Functional};
use cfn_core::oracle::{
    contraction_check, mc_c_omega_sp4, projection_property_check, quadrature_c_rank1, sl2_ncc_han,
    sp4_han, MCConfig, QuadratureConfig, Rank1Kind, Sym2,
};
use cfn_core::rootsys::{
    all_signatures, cone_member, has_simple_noncompact, Cone, ConeQuery, PositiveSystem,
};

#[derive(Debug, Clone)]
pub struct Options {
    pub m: Option<u32>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub entry: Option<String>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cjson(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

// 20 points on the convergent side of Re z = edge, real and complex, close to
// and far from the edge.
fn z_points(edge: f64, side: f64) -> Vec<Complex64> {
    let offsets = [0.05, 0.2, 0.5, 0.9, 1.3, 1.7, 2.2, 2.9, 3.6, 4.5];
    offsets
        .iter()
        .enumerate()
        .flat_map(|(k, d)| {
            let im = if k % 2 == 0 { 0.7 } else { -2.3 } * (1.0 + k as f64 / 4.0);
            [c(edge + side * d, 0.0), c(edge + side * d, im)]
        })
        .collect()
}

fn ms(opts: &Options) -> Result<Vec<u32>, String> {
    match opts.m {
        Some(0) => Err("--m must be positive".into()),
        Some(m) => Ok(vec![m]),
        None => Ok(vec![1, 2, 3]),
    }
}

fn rank1_suite(kind: Rank1Kind, opts: &Options) -> Result<Value, String> {
    let tol = opts.tol.unwrap_or(1e-8);
    let cfg = QuadratureConfig::default();
    let mut passed = true;
    let mut cases = Vec::new();
    for m in ms(opts)? {
        let (edge, side) = match kind {
            Rank1Kind::Ncc => (2.0 - f64::from(m), -1.0),
            Rank1Kind::Riemannian => (0.0, 1.0),
        };
        let rows: Vec<(Complex64, Complex64, Complex64)> = z_points(edge, side)
            .into_par_iter()
            .map(|z| {
                let q = quadrature_c_rank1(kind, m, z, &cfg).map_err(|e| format!("m = {m}, z = {z}: {e}"))?;
                let f = match kind {
                    Rank1Kind::Ncc => noncompact_factor(m, z),
                    Rank1Kind::Riemannian => compact_factor(m, z),
                };
                let f = f.value.ok_or_else(|| format!("m = {m}, z = {z}: formula pole"))?;
                Ok((z, q, f))
            })
            .collect::<Result<_, String>>()?;
        let kappa = rows[0].1 / rows[0].2;
        let spread = rows.iter().map(|(_, q, f)| rel(q / f, kappa)).fold(0.0, f64::max);
        let ok = spread <= tol;
        passed &= ok;
        cases.push(json!({
            "m": m,
            "kappa": cjson(kappa),
            "max_relative_spread": spread,
            "passed": ok,
            "points": rows.iter().map(|(z, q, f)| json!({
                "z": cjson(*z), "quadrature": cjson(*q), "formula": cjson(*f), "ratio": cjson(q / f)
            })).collect::<Vec<_>>(),
        }));
    }
    // Closed-form spot values for m = 1.
    let spots: &[(f64, f64)] = match kind {
        Rank1Kind::Ncc => &[(-1.0, 2.0), (0.0, PI)],
        Rank1Kind::Riemannian => &[(1.0, PI), (2.0, 2.0)],
    };
    let mut spot_rows = Vec::new();
    for &(z, want) in spots {
        let v = quadrature_c_rank1(kind, 1, c(z, 0.0), &cfg).map_err(|e| e.to_string())?;
        let err = rel(v, c(want, 0.0));
        let ok = err <= 1e-12;
        passed &= ok;
        spot_rows.push(json!({ "m": 1, "z": z, "value": cjson(v), "expected": want, "relative_error": err, "passed": ok }));
    }
    Ok(json!({ "cases": cases, "spot_values": spot_rows, "tolerance": tol, "passed": passed }))
}

fn sp4_mc_suite(opts: &Options) -> Result<Value, String> {
    let sigmas = opts.tol.unwrap_or(3.0);
    let samples = opts.samples.unwrap_or(1_000_000);
    let rs = Catalog::from_env().load_entry("sp4r-gl2r").map_err(|e| e.to_string())?.root_system;
    let lambdas = [
        Functional::real(vec![-2.0, -2.0]),
        Functional::real(vec![-3.0, -2.0]),
        Functional::real(vec![-2.0, -3.0]),
        Functional::real(vec![-1.5, -2.5]),
        Functional::real(vec![-2.5, -1.2]),
        Functional::new(vec![-2.0, -2.5], vec![0.5, 0.3]),
    ];
    let mut rows = Vec::new();
    for (j, l) in lambdas.iter().enumerate() {
        let cfg = MCConfig { samples, seed: opts.seed, streams: 32, stream_offset: 32 * j as u64 };
        let est = mc_c_omega_sp4(&rs, l, &cfg).map_err(|e| format!("λ = {:?}: {e}", l.re))?;
        let f = c_omega(&rs, l).map_err(|e| e.to_string())?.value.ok_or("c_Ω has a pole")?;
        rows.push((l, est, f, est.estimate / f, est.stderr / f.norm()));
    }
    let (k0, s0) = (rows[0].3, rows[0].4);
    let mut passed = true;
    let points: Vec<Value> = rows
        .iter()
        .enumerate()
        .map(|(j, (l, est, f, k, s))| {
            let z = if j == 0 { 0.0 } else { (k - k0).norm() / s.hypot(s0) };
            let ok = z <= sigmas;
            passed &= ok;
            json!({
                "lambda": { "re": l.re, "im": l.im },
                "formula": cjson(*f),
                "estimate": cjson(est.estimate),
                "stderr": est.stderr,
                "relative_stderr": est.stderr / est.estimate.norm(),
                "accepted": est.accepted,
                "kappa": cjson(*k),
                "deviation_in_sigma": z,
                "passed": ok,
            })
        })
        .collect();
    Ok(json!({
        "samples": samples,
        "seed": opts.seed,
        "streams": 32,
        "reference_kappa": cjson(k0),
        "max_sigma": sigmas,
        "points": points,
        "passed": passed,
    }))
}

fn structure_suite(opts: &Options) -> Result<Value, String> {
    let cat = Catalog::from_env();
    let names: Vec<String> = match &opts.entry {
        Some(n) => vec![n.clone()],
        None => cat.list_entries().map_err(|e| e.to_string())?.into_iter().map(|s| s.name).collect(),
    };
    let mut passed = true;
    let mut entries = Vec::new();
    for name in names {
        let entry = cat.entry(&name).map_err(|e| e.to_string())?;
        let rs = entry.build().map_err(|e| e.to_string())?;
        let report = cfn_core::rootsys::validate_structure(&rs);
        let hard = report.hard_failures().len();

        let sigs = all_signatures(&rs).map_err(|e| e.to_string())?;
        let expected = 1usize << sigs.first().map_or(0, |s| s.simple_roots().len());
        let mut distinct: Vec<Vec<f64>> = sigs.iter().map(|s| s.values().iter().map(|v| v.as_f64()).collect()).collect();
        distinct.sort_by(|a, b| a.partial_cmp(b).expect("±1"));
        distinct.dedup();
        let violations: usize = sigs.iter().map(|s| s.axiom_violations(&rs).len()).sum();
        let sig_ok = distinct.len() == expected && violations == 0;

        // Positive systems from a deterministic sweep of directions.
        let (mut tested, mut simple_ok) = (0, true);
        if !rs.noncompact_positive().is_empty() {
            for k in 0..4000 {
                if tested == 100 {
                    break;
                }
                let t = 0.618_033_988_749_895 * k as f64;
                let v: Vec<f64> = (0..rs.rank()).map(|i| (t * (i as f64 + 1.0) * 2.0 * PI).sin() + 1e-3 * (i as f64 + 1.0)).collect();
                let Ok(r) = PositiveSystem::from_regular_vector(&rs, &v) else { continue };
                if !rs.noncompact_positive().iter().any(|&i| r.contains(i)) {
                    continue;
                }
                tested += 1;
                simple_ok &= has_simple_noncompact(&rs, &r).map_err(|e| e.to_string())?;
            }
            simple_ok &= tested == 100;
        }

        // C_min ⊆ C_max on 1000 nonnegative combinations.
        let nc = rs.noncompact_positive();
        let mut cone_ok = true;
        if !nc.is_empty() {
            for k in 0..1000 {
                let mut x = vec![0.0; rs.rank()];
                for (j, &i) in nc.iter().enumerate() {
                    let w = ((k * (j + 3) * 7919) % 1000) as f64 / 100.0;
                    for (xk, hk) in x.iter_mut().zip(rs.coroot_of(i)) {
                        *xk += w * hk;
                    }
                }
                cone_ok &= cone_member(&rs, &ConeQuery { point: x, cone: Cone::Max });
            }
        }

        let ok = hard == 0 && sig_ok && simple_ok && cone_ok;
        passed &= ok;
        entries.push(json!({
            "name": name,
            "hard_failures": hard,
            "report": report,
            "signatures": { "assignments": sigs.len(), "distinct": distinct.len(), "expected": expected, "axiom_violations": violations, "passed": sig_ok },
            "simple_noncompact": { "positive_systems_tested": tested, "passed": simple_ok },
            "cmin_in_cmax": { "combinations": if nc.is_empty() { 0 } else { 1000 }, "passed": cone_ok },
            "passed": ok,
        }));
    }
    Ok(json!({ "entries": entries, "passed": passed }))
}

fn projection_suite(opts: &Options) -> Result<Value, String> {
    let samples = opts.samples.unwrap_or(10_000);
    let tol = opts.tol.unwrap_or(1e-8);
    let projection = projection_property_check(samples, opts.seed);
    let rs = Catalog::from_env().load_entry("sp4r-gl2r").map_err(|e| e.to_string())?.root_system;
    let contraction = contraction_check(&rs, samples, opts.seed.wrapping_add(1));
    let mut slice = Vec::new();
    let mut slice_ok = true;
    for k in 0..20 {
        let x = -0.97 + 1.94 * k as f64 / 19.0;
        let sp4 = sp4_han(&Sym2::diag(x, 0.0)).map_err(|e| format!("x = {x}: {e}"))?;
        let sl2 = sl2_ncc_han(x).map_err(|e| format!("x = {x}: {e}"))?;
        let (a, b) = (sp4.coroot_coefficient(&[1.0, 0.0]), sl2.coroot_coefficient(&[SQRT_2]));
        let err = (a - b).abs().max(sp4.a_log[1].abs());
        slice_ok &= err <= tol;
        slice.push(json!({ "x": x, "sp4": a, "sl2": b, "error": err }));
    }
    let passed = projection.all_passed() && contraction.all_passed() && slice_ok;
    Ok(json!({
        "samples": samples,
        "seed": opts.seed,
        "projection": projection,
        "contraction": contraction,
        "rank_one_slice": { "tolerance": tol, "points": slice, "passed": slice_ok },
        "passed": passed,
    }))
}

pub fn run(suite: &str, opts: &Options) -> Result<Value, String> {
    let mut report = match suite {
        "rank1" => rank1_suite(Rank1Kind::Ncc, opts)?,
        "rank1-riemannian" => rank1_suite(Rank1Kind::Riemannian, opts)?,
        "sp4-mc" => sp4_mc_suite(opts)?,
        "structure" => structure_suite(opts)?,
        "projection" => projection_suite(opts)?,
        other => return Err(format!("unknown suite {other:?}")),
    };
    report["suite"] = json!(suite);
    Ok(report)
}
