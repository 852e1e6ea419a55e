//! Named NCC symmetric spaces stored as small TOML files.
//!
//! ```toml
//! name = "sp4r-gl2r"
//! cartan_type = "C"          # A, B, C or D (BC is rejected as non-reduced)
//! rank = 2
//! x0 = [0.5, 0.5]            # coordinates of X₀; α(X₀) ∈ {−1, 0, 1}
//! realization = "SP4_NCC"    # SL2_NCC | SL2_RIEMANNIAN | SP4_NCC | NONE
//! dim_m = 0                  # optional: dim of the centralizer of a in k
//! dim_total = 10             # optional: dim g = rank + dim_m + Σ m_α
//! notes = "..."              # optional
//!
//! [mult]
//! long = 1
//! short = 1                  # only for types with two root lengths
//! ```
//!
//! Unknown keys are rejected. The bundled entries are compiled into the
//! binary; setting `CFN_DATA_DIR` replaces them by the `*.toml` files of that
//! directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootsys::{
    build_root_system, validate_structure, CartanType, Multiplicities, RootSystem, RootSystemError,
    ValidationReport,
};

pub const DATA_DIR_ENV: &str = "CFN_DATA_DIR";

const BUNDLED: &[(&str, &str)] = &[
    ("sl2r-riemannian.toml", include_str!("../data/sl2r-riemannian.toml")),
    ("sl2r-so11.toml", include_str!("../data/sl2r-so11.toml")),
    ("sp4r-gl2r.toml", include_str!("../data/sp4r-gl2r.toml")),
];

/// Matrix model available to the numerical oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Realization {
    #[serde(rename = "SL2_NCC")]
    Sl2Ncc,
    #[serde(rename = "SL2_RIEMANNIAN")]
    Sl2Riemannian,
    #[serde(rename = "SP4_NCC")]
    Sp4Ncc,
    #[default]
    #[serde(rename = "NONE")]
    None,
}

impl std::fmt::Display for Realization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Realization::Sl2Ncc => "SL2_NCC",
            Realization::Sl2Riemannian => "SL2_RIEMANNIAN",
            Realization::Sp4Ncc => "SP4_NCC",
            Realization::None => "NONE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub cartan_type: CartanType,
    pub rank: usize,
    pub x0: Vec<f64>,
    #[serde(default)]
    pub realization: Realization,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_total: Option<u32>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    pub mult: Multiplicities,
}

impl CatalogEntry {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        toml::from_str(text).map_err(|e| CatalogError::Parse { source_name: "<string>".into(), message: e.to_string() })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("catalog entries always serialize")
    }

    pub fn build(&self) -> Result<RootSystem, CatalogError> {
        build_root_system(self.cartan_type, self.rank, &self.mult, self.x0.clone())
            .map_err(|e| CatalogError::Invalid { name: self.name.clone(), source: e })
    }

    fn check_dimension(&self, rs: &RootSystem) -> Result<(), CatalogError> {
        let Some(total) = self.dim_total else { return Ok(()) };
        let roots: u32 = rs.roots().iter().map(|a| a.multiplicity).sum();
        let base = rs.rank() as u32 + roots;
        let ok = match self.dim_m {
            Some(m) => base + m == total,
            None => total >= base,
        };
        if ok {
            Ok(())
        } else {
            Err(CatalogError::Dimension {
                name: self.name.clone(),
                declared: total,
                computed: base + self.dim_m.unwrap_or(0),
            })
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error("cannot parse {source_name}: {message}")]
    Parse { source_name: String, message: String },
    #[error("entry {name:?} is not a valid root system: {source}")]
    Invalid { name: String, source: RootSystemError },
    #[error("entry {name:?}: declared dim g = {declared}, root data give {computed}")]
    Dimension { name: String, declared: u32, computed: u32 },
    #[error("entry {name:?} fails structure checks: {}", failures.join("; "))]
    ValidationFailure { name: String, failures: Vec<String> },
    #[error("duplicate catalog entry {0:?}")]
    Duplicate(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// An entry together with its root system and validation report.
#[derive(Debug, Clone)]
pub struct LoadedEntry {
    pub entry: CatalogEntry,
    pub root_system: RootSystem,
    pub report: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntrySummary {
    pub name: String,
    pub cartan_type: CartanType,
    pub rank: usize,
    /// `r = |Γ|`.
    pub cascade_len: usize,
    pub realization: Realization,
}

#[derive(Debug, Clone)]
enum Source {
    Bundled,
    Dir(PathBuf),
}

#[derive(Debug, Clone)]
pub struct Catalog {
    source: Source,
}

impl Catalog {
    pub fn bundled() -> Self {
        Catalog { source: Source::Bundled }
    }

    pub fn from_dir(dir: impl Into<PathBuf>) -> Self {
        Catalog { source: Source::Dir(dir.into()) }
    }

    /// The directory named by `CFN_DATA_DIR` if set, the bundled data otherwise.
    pub fn from_env() -> Self {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Catalog::from_dir(dir),
            _ => Catalog::bundled(),
        }
    }

    fn entries(&self) -> Result<Vec<CatalogEntry>, CatalogError> {
        let raw: Vec<(String, String)> = match &self.source {
            Source::Bundled => BUNDLED.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect(),
            Source::Dir(dir) => read_dir(dir)?,
        };
        let mut out: Vec<CatalogEntry> = Vec::with_capacity(raw.len());
        for (source_name, text) in raw {
            let entry: CatalogEntry = toml::from_str(&text)
                .map_err(|e| CatalogError::Parse { source_name, message: e.to_string() })?;
            if out.iter().any(|e| e.name == entry.name) {
                return Err(CatalogError::Duplicate(entry.name));
            }
            out.push(entry);
        }
        out.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(out)
    }

    pub fn list_entries(&self) -> Result<Vec<EntrySummary>, CatalogError> {
        self.entries()?
            .into_iter()
            .map(|e| {
                let rs = e.build()?;
                Ok(EntrySummary {
                    name: e.name,
                    cartan_type: e.cartan_type,
                    rank: e.rank,
                    cascade_len: rs.gamma_indices().len(),
                    realization: e.realization,
                })
            })
            .collect()
    }

    /// Raw entry data without building the root system.
    pub fn entry(&self, name: &str) -> Result<CatalogEntry, CatalogError> {
        self.entries()?
            .into_iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
    }

    /// Builds and validates the named entry. Hard validator failures are errors.
    pub fn load_entry(&self, name: &str) -> Result<LoadedEntry, CatalogError> {
        load(self.entry(name)?)
    }
}

/// Builds and validates an entry that did not come from a catalog.
pub fn load(entry: CatalogEntry) -> Result<LoadedEntry, CatalogError> {
    let rs = entry.build()?;
    entry.check_dimension(&rs)?;
    let report = validate_structure(&rs);
    let failures: Vec<String> = report
        .hard_failures()
        .iter()
        .map(|c| format!("({}) {}: {}", c.id, c.title, c.detail))
        .collect();
    if !failures.is_empty() {
        return Err(CatalogError::ValidationFailure { name: entry.name, failures });
    }
    Ok(LoadedEntry { entry, root_system: rs, report })
}

fn read_dir(dir: &Path) -> Result<Vec<(String, String)>, CatalogError> {
    let io = |source| CatalogError::Io { path: dir.to_path_buf(), source };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml") && p.is_file())
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).map_err(|source| CatalogError::Io { path: p.clone(), source })?;
            Ok((p.display().to_string(), text))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_entries_load() {
        let cat = Catalog::bundled();
        let names: Vec<String> = cat.list_entries().unwrap().into_iter().map(|s| s.name).collect();
        assert_eq!(names, ["sl2r-riemannian", "sl2r-so11", "sp4r-gl2r"]);
        for n in &names {
            let e = cat.load_entry(n).unwrap();
            assert!(e.report.hard_failures().is_empty(), "{n}");
        }
    }

    #[test]
    fn unknown_entry() {
        assert!(matches!(Catalog::bundled().load_entry("unknown"), Err(CatalogError::UnknownEntry(_))));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("colour = \"blue\"\n{}", BUNDLED[1].1);
        assert!(matches!(CatalogEntry::parse(&text), Err(CatalogError::Parse { .. })));
        let text = BUNDLED[1].1.replace("long = 1", "long = 1\nmedium = 2");
        assert!(matches!(CatalogEntry::parse(&text), Err(CatalogError::Parse { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let mut e = CatalogEntry::parse(BUNDLED[2].1).unwrap();
        e.dim_total = Some(11);
        assert!(matches!(load(e), Err(CatalogError::Dimension { computed: 10, .. })));
    }

    #[test]
    fn realization_tags() {
        let cat = Catalog::bundled();
        assert_eq!(cat.entry("sl2r-so11").unwrap().realization, Realization::Sl2Ncc);
        assert_eq!(cat.entry("sp4r-gl2r").unwrap().realization, Realization::Sp4Ncc);
        assert_eq!(cat.entry("sl2r-riemannian").unwrap().realization, Realization::Sl2Riemannian);
    }
}
