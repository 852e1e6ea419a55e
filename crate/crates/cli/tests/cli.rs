use std::process::{Command, Output};

fn cfn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfn")).args(args).env_remove("CFN_DATA_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

// (header, rows) of CSV output.
fn csv(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut lines = text.lines().map(|l| l.split(',').map(String::from).collect::<Vec<_>>());
    let header = lines.next().unwrap();
    (header, lines.collect())
}

#[test]
fn catalog_commands() {
    let o = cfn(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 4);

    let o = cfn(&["catalog", "list", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);

    let o = cfn(&["catalog", "describe", "sp4r-gl2r"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("Γ = {(2, 0), (0, 2)}"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("(c)") && l.contains("pass")), "{text}");

    let o = cfn(&["catalog", "describe", "nope"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn data_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/sl2r-so11.toml");
    std::fs::copy(src, dir.path().join("sl2r-so11.toml")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cfn"))
        .args(["catalog", "list"])
        .env("CFN_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn eval_rank_one_value() {
    let o = cfn(&["eval", "--entry", "sl2r-so11", "--func", "comega", "--coroot-values", "--grid", "-1"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv(&o);
    assert_eq!(header, ["lambda_1", "lambda_im_1", "func", "re", "im", "in_domain", "pole"]);
    let re: f64 = rows[0][3].parse().unwrap();
    assert!((re - 2.0).abs() < 1e-12);
    assert_eq!(rows[0][5], "true");
}

#[test]
fn eval_line_crosses_the_domain_edge() {
    let o = cfn(&["eval", "--entry", "sl2r-so11", "--coroot-values", "--line", "0:1:0:2:0.25"]);
    assert_eq!(code(&o), 0);
    let (_, rows) = csv(&o);
    assert_eq!(rows.len(), 9);
    for r in &rows {
        let z: f64 = r[0].parse::<f64>().unwrap() * std::f64::consts::SQRT_2;
        assert_eq!(r[5] == "true", z < 1.0 - 1e-12, "{r:?}");
        assert_eq!(r[6] == "true", (z - 1.0).abs() < 1e-9, "{r:?}");
    }
    assert!(rows.iter().any(|r| r[6] == "true" && r[3].is_empty()));
}

#[test]
fn eval_c_is_c0_times_comega() {
    let grid = "-3,-2;-2.5,-1.5+0.2i";
    let run = |f: &str| {
        let o = cfn(&["eval", "--entry", "sp4r-gl2r", "--func", f, "--grid", grid]);
        assert_eq!(code(&o), 0);
        csv(&o).1
    };
    let (c, c0, co) = (run("c"), run("c0"), run("comega"));
    for k in 0..2 {
        let num = |rows: &Vec<Vec<String>>, j: usize| rows[k][j].parse::<f64>().unwrap();
        let z = |rows: &Vec<Vec<String>>| num_complex::Complex64::new(num(rows, 5), num(rows, 6));
        let prod = z(&c0) * z(&co);
        assert!((z(&c) - prod).norm() <= 1e-13 * prod.norm());
        assert_eq!(c[k][7], "true");
    }
}

#[test]
fn eval_cr_and_errors() {
    let o = cfn(&["eval", "--entry", "sp4r-gl2r", "--func", "cr", "--r", "flipped", "--grid", "1,2", "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["func"], "cr");
    // c_R on −Δ_n⁺ ∪ Δ_k⁺ is c₀: B(1/2, 1/2) = π at λ(H_{e₂−e₁}) = 1.
    assert!((v[0]["re"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);

    for args in [
        vec!["eval", "--entry", "sp4r-gl2r", "--grid", "1"],
        vec!["eval", "--entry", "sp4r-gl2r", "--grid", "a,b"],
        vec!["eval", "--entry", "sl2r-so11", "--line", "0:1:0:1:0"],
        vec!["eval", "--entry", "sl2r-riemannian", "--coroot-values", "--grid", "1"],
        vec!["eval", "--entry", "nope", "--grid", "1"],
        vec!["eval", "--entry", "sl2r-so11"],
    ] {
        assert_eq!(code(&cfn(&args)), 2, "{args:?}");
    }
}

#[test]
fn poles() {
    let o = cfn(&["poles", "--entry", "sl2r-so11"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("λ(H_α) ∈ {1, 3, 5, …}"));
    assert_eq!(stdout(&cfn(&["poles", "--entry", "sp4r-gl2r"])).lines().count(), 4);
    assert_eq!(code(&cfn(&["poles", "--entry", "nope"])), 2);
}

#[test]
fn verify_suites() {
    for args in [
        vec!["verify", "rank1", "--m", "1"],
        vec!["verify", "rank1-riemannian"],
        vec!["verify", "structure"],
        vec!["verify", "projection", "--samples", "2e3"],
        vec!["verify", "sp4-mc", "--samples", "2e4", "--seed", "42"],
    ] {
        let o = cfn(&args);
        assert_eq!(code(&o), 0, "{args:?}: {}", stdout(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["passed"], true);
    }
    // An impossible tolerance is a verification failure, not a usage error.
    let o = cfn(&["verify", "rank1", "--m", "2", "--tol", "1e-30"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);

    assert_eq!(code(&cfn(&["verify", "bogus"])), 2);
    assert_eq!(code(&cfn(&["verify", "sp4-mc", "--samples", "0"])), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["eval", "--entry", "sp4r-gl2r", "--func", "c", "--line", "-3,-2:0.1,0.2+0.1i:0:5:0.5", "--out", "json"],
        vec!["verify", "sp4-mc", "--samples", "5000", "--seed", "7"],
    ] {
        assert_eq!(cfn(&args).stdout, cfn(&args).stdout, "{args:?}");
    }
}
