use std::fs;

use cfn_core::catalog::{Catalog, CatalogEntry, CatalogError, DATA_DIR_ENV};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

fn copy_bundled(dir: &std::path::Path) {
    for e in fs::read_dir(DATA).unwrap() {
        let p = e.unwrap().path();
        fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
}

#[test]
fn round_trip_matches_data_files() {
    for e in fs::read_dir(DATA).unwrap() {
        let text = fs::read_to_string(e.unwrap().path()).unwrap();
        let entry = CatalogEntry::parse(&text).unwrap();
        let loaded = Catalog::bundled().load_entry(&entry.name).unwrap();
        let written = loaded.entry.to_toml();
        let a: toml::Value = toml::from_str(&text).unwrap();
        let b: toml::Value = toml::from_str(&written).unwrap();
        assert_eq!(a, b, "{}", entry.name);
        assert_eq!(CatalogEntry::parse(&written).unwrap(), entry);
    }
}

#[test]
fn every_bundled_entry_validates() {
    let cat = Catalog::bundled();
    for s in cat.list_entries().unwrap() {
        let loaded = cat.load_entry(&s.name).unwrap();
        assert!(loaded.report.hard_failures().is_empty(), "{}", loaded.report);
    }
}

#[test]
fn directory_catalogs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(Catalog::from_dir(dir.path()).list_entries().unwrap().is_empty());

    copy_bundled(dir.path());
    let user = Catalog::from_dir(dir.path());
    assert_eq!(user.list_entries().unwrap(), Catalog::bundled().list_entries().unwrap());

    // The only test that touches the environment variable.
    std::env::set_var(DATA_DIR_ENV, dir.path());
    fs::remove_file(dir.path().join("sl2r-riemannian.toml")).unwrap();
    assert_eq!(Catalog::from_env().list_entries().unwrap().len(), 2);
    std::env::remove_var(DATA_DIR_ENV);
    assert_eq!(Catalog::from_env().list_entries().unwrap().len(), 3);

    let missing = Catalog::from_dir(dir.path().join("missing"));
    assert!(matches!(missing.list_entries(), Err(CatalogError::Io { .. })));
}

#[test]
fn bad_files_are_rejected() {
    let base = fs::read_to_string(format!("{DATA}/sl2r-so11.toml")).unwrap();
    let cases = [
        (format!("{base}\ncolour = \"blue\"\n"), "Parse"),
        (base.replace("dim_total = 3", "dim_total = 4"), "Dimension"),
        (base.replace("0.7071067811865476", "0.3"), "Invalid"),
        (base.replace("rank = 1", "rank = 0"), "Invalid"),
    ];
    for (text, want) in cases {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("bad.toml"), &text).unwrap();
        let err = match CatalogEntry::parse(&text) {
            Err(e) => e,
            Ok(e) => Catalog::from_dir(dir.path()).load_entry(&e.name).unwrap_err(),
        };
        let got = format!("{err:?}");
        assert!(got.starts_with(want), "expected {want}, got {got}");
    }

    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.toml"), &base).unwrap();
    fs::write(dir.path().join("b.toml"), &base).unwrap();
    assert!(matches!(Catalog::from_dir(dir.path()).list_entries(), Err(CatalogError::Duplicate(_))));
}

#[test]
fn unknown_entry() {
    assert!(matches!(Catalog::bundled().load_entry("nope"), Err(CatalogError::UnknownEntry(_))));
}
