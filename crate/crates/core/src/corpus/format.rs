//! On-disk corpus format, version 1.
//!
//! Two layouts are accepted:
//!
//! * a directory tree, one sub-directory per package holding a
//!   `package.json` manifest (`{"name": ..., "units": [file, ...]}`) and one
//!   JSON file per unit;
//! * a single `*.corpus.json` file with every package and unit inlined.
//!
//! Unit files look like
//! `{"name": "Foo", "defines": [{"name": "Foo", "kind": "class"}], "methods": [{"id": "bar", "refs": ["Baz"]}]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CorpusError, SymbolKind};

pub const PACKAGE_MANIFEST: &str = "package.json";
pub const SINGLE_FILE_SUFFIX: &str = ".corpus.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCorpus {
    pub name: String,
    pub packages: Vec<RawPackage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPackage {
    pub name: String,
    #[serde(default)]
    pub units: Vec<RawUnit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawUnit {
    pub name: String,
    #[serde(default)]
    pub defines: Vec<RawDef>,
    #[serde(default)]
    pub methods: Vec<RawMethod>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDef {
    pub name: String,
    pub kind: SymbolKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMethod {
    pub id: String,
    #[serde(default)]
    pub refs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageManifest {
    pub name: String,
    pub units: Vec<String>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|err| CorpusError::Malformed {
        path: path.to_path_buf(),
        message: err.to_string(),
    })
}

/// Reads either layout into its raw form. No validation beyond JSON shape.
pub fn read_raw(path: &Path) -> Result<RawCorpus, CorpusError> {
    let meta = fs::metadata(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if meta.is_file() {
        return read_json(path);
    }

    let mut package_dirs = Vec::new();
    let entries = fs::read_dir(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    for entry in entries {
        let entry = entry.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let dir = entry.path();
        if dir.is_dir() && dir.join(PACKAGE_MANIFEST).is_file() {
            package_dirs.push(dir);
        }
    }
    // Directory iteration order is platform dependent.
    package_dirs.sort();

    let mut packages = Vec::with_capacity(package_dirs.len());
    for dir in package_dirs {
        let manifest: PackageManifest = read_json(&dir.join(PACKAGE_MANIFEST))?;
        let mut units = Vec::with_capacity(manifest.units.len());
        for file in &manifest.units {
            units.push(read_json::<RawUnit>(&dir.join(file))?);
        }
        packages.push(RawPackage {
            name: manifest.name,
            units,
        });
    }

    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_owned());
    Ok(RawCorpus { name, packages })
}

/// Writes the directory layout. Package directories and unit files are named
/// after the package and unit names.
pub fn write_dir(raw: &RawCorpus, root: &Path) -> Result<(), CorpusError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CorpusError::Io { path, source }
    };
    fs::create_dir_all(root).map_err(io(root))?;
    for package in &raw.packages {
        let dir = root.join(&package.name);
        fs::create_dir_all(&dir).map_err(io(&dir))?;
        let mut files = Vec::with_capacity(package.units.len());
        for unit in &package.units {
            let file = format!("{}.json", unit.name);
            let path = dir.join(&file);
            fs::write(&path, to_pretty(unit)).map_err(io(&path))?;
            files.push(file);
        }
        let manifest = PackageManifest {
            name: package.name.clone(),
            units: files,
        };
        let path = dir.join(PACKAGE_MANIFEST);
        fs::write(&path, to_pretty(&manifest)).map_err(io(&path))?;
    }
    Ok(())
}

pub fn write_single_file(raw: &RawCorpus, path: &Path) -> Result<(), CorpusError> {
    fs::write(path, to_pretty(raw)).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("corpus types serialize");
    text.push('\n');
    text
}
