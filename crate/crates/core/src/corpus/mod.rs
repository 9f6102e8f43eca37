//! Package-structured code corpus: loading, validation, reference resolution
//! and corpus statistics.
//!
//! A [`Repository`] is immutable once built. Packages, units and methods are
//! kept in name order so that every downstream computation is deterministic
//! regardless of how the corpus was laid out on disk.

mod cases;
pub mod format;
mod stats;

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cases::{extract_benchmark_cases, BenchmarkCase, CaseFilter, PrefixRange};
pub use format::RawCorpus;
pub use stats::{corpus_stats, CorpusStats};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed corpus at {path}: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("package `{0}` is declared more than once")]
    DuplicatePackage(String),
    #[error("symbol `{symbol}` is defined more than once in package `{package}`")]
    DuplicateSymbolInPackage { package: String, symbol: String },
    #[error("corpus contains no packages")]
    EmptyCorpus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusOptions {
    /// Separator between package name segments (`Spec2-Core` has two).
    pub separator: char,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        Self { separator: '-' }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolKind {
    #[serde(rename = "class")]
    ClassName,
    #[serde(rename = "global")]
    GlobalVariable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolDef {
    pub name: String,
    pub kind: SymbolKind,
    pub defining_package: String,
}

/// One use of a global name inside a method body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReferenceSite {
    pub symbol_name: String,
    pub package_name: String,
    pub unit_name: String,
    pub method_id: String,
    /// Position of the reference within its method, in source order.
    pub ordinal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Method {
    pub id: String,
    pub references: Vec<ReferenceSite>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub name: String,
    pub defined_symbols: Vec<SymbolDef>,
    pub methods: Vec<Method>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Package {
    pub name: String,
    pub units: Vec<Unit>,
}

impl Package {
    pub fn symbols(&self) -> impl Iterator<Item = &SymbolDef> {
        self.units.iter().flat_map(|u| u.defined_symbols.iter())
    }

    pub fn references(&self) -> impl Iterator<Item = &ReferenceSite> {
        self.units
            .iter()
            .flat_map(|u| u.methods.iter())
            .flat_map(|m| m.references.iter())
    }

    pub fn method_count(&self) -> usize {
        self.units.iter().map(|u| u.methods.len()).sum()
    }
}

/// How a reference site binds to a definition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Resolution {
    Internal,
    External(String),
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repository {
    name: String,
    separator: char,
    packages: Vec<Package>,
    package_lookup: HashMap<String, usize>,
    /// Symbol name to the indices of its defining packages, ascending.
    definitions: HashMap<String, Vec<usize>>,
}

/// Loads a corpus from a directory tree or a single `*.corpus.json` file.
pub fn load_corpus(path: &Path, options: &CorpusOptions) -> Result<Repository, CorpusError> {
    let raw = format::read_raw(path)?;
    Repository::from_raw(raw, options).map_err(|err| match err {
        CorpusError::Malformed { path: p, message } if p.as_os_str().is_empty() => {
            CorpusError::Malformed {
                path: path.to_path_buf(),
                message,
            }
        }
        other => other,
    })
}

fn malformed(message: String) -> CorpusError {
    CorpusError::Malformed {
        path: PathBuf::new(),
        message,
    }
}

pub(crate) fn starts_uppercase(name: &str) -> bool {
    name.chars().next().is_some_and(char::is_uppercase)
}

impl Repository {
    /// Validates a raw corpus and brings it into canonical order.
    pub fn from_raw(raw: RawCorpus, options: &CorpusOptions) -> Result<Self, CorpusError> {
        if raw.packages.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }

        let mut packages = Vec::with_capacity(raw.packages.len());
        for raw_package in raw.packages {
            let name = raw_package.name;
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(malformed(format!("invalid package name `{name}`")));
            }

            let mut units = Vec::with_capacity(raw_package.units.len());
            for raw_unit in raw_package.units {
                if raw_unit.name.is_empty() {
                    return Err(malformed(format!("unnamed unit in package `{name}`")));
                }
                let mut defined_symbols: Vec<SymbolDef> = raw_unit
                    .defines
                    .into_iter()
                    .map(|d| SymbolDef {
                        name: d.name,
                        kind: d.kind,
                        defining_package: name.clone(),
                    })
                    .collect();
                defined_symbols.sort_by(|a, b| a.name.cmp(&b.name));
                if let Some(bad) = defined_symbols.iter().find(|d| !starts_uppercase(&d.name)) {
                    return Err(malformed(format!(
                        "global `{}` in `{name}` must start with an uppercase letter",
                        bad.name
                    )));
                }

                let mut methods = Vec::with_capacity(raw_unit.methods.len());
                for raw_method in raw_unit.methods {
                    if raw_method.id.is_empty() {
                        return Err(malformed(format!(
                            "method without id in `{name}`/{}",
                            raw_unit.name
                        )));
                    }
                    let mut references = Vec::with_capacity(raw_method.refs.len());
                    for (ordinal, symbol_name) in raw_method.refs.into_iter().enumerate() {
                        if symbol_name.is_empty() {
                            return Err(malformed(format!(
                                "empty reference in `{name}`/{}>>{}",
                                raw_unit.name, raw_method.id
                            )));
                        }
                        references.push(ReferenceSite {
                            symbol_name,
                            package_name: name.clone(),
                            unit_name: raw_unit.name.clone(),
                            method_id: raw_method.id.clone(),
                            ordinal,
                        });
                    }
                    methods.push(Method {
                        id: raw_method.id,
                        references,
                    });
                }
                methods.sort_by(|a, b| a.id.cmp(&b.id));
                if let Some(pair) = methods.windows(2).find(|w| w[0].id == w[1].id) {
                    return Err(malformed(format!(
                        "method `{}` appears twice in `{name}`/{}",
                        pair[0].id, raw_unit.name
                    )));
                }

                units.push(Unit {
                    name: raw_unit.name,
                    defined_symbols,
                    methods,
                });
            }
            units.sort_by(|a, b| a.name.cmp(&b.name));
            if let Some(pair) = units.windows(2).find(|w| w[0].name == w[1].name) {
                return Err(malformed(format!(
                    "unit `{}` appears twice in `{name}`",
                    pair[0].name
                )));
            }

            let mut seen = std::collections::HashSet::new();
            for def in units.iter().flat_map(|u| u.defined_symbols.iter()) {
                if !seen.insert(def.name.as_str()) {
                    return Err(CorpusError::DuplicateSymbolInPackage {
                        package: name.clone(),
                        symbol: def.name.clone(),
                    });
                }
            }

            packages.push(Package { name, units });
        }

        packages.sort_by(|a, b| a.name.cmp(&b.name));
        if let Some(pair) = packages.windows(2).find(|w| w[0].name == w[1].name) {
            return Err(CorpusError::DuplicatePackage(pair[0].name.clone()));
        }

        let package_lookup = packages
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), i))
            .collect();
        let mut definitions: HashMap<String, Vec<usize>> = HashMap::new();
        for (index, package) in packages.iter().enumerate() {
            for def in package.symbols() {
                definitions.entry(def.name.clone()).or_default().push(index);
            }
        }

        Ok(Self {
            name: raw.name,
            separator: options.separator,
            packages,
            package_lookup,
            definitions,
        })
    }

    /// Converts back into the serializable form, in canonical order.
    pub fn to_raw(&self) -> RawCorpus {
        use format::{RawDef, RawMethod, RawPackage, RawUnit};
        RawCorpus {
            name: self.name.clone(),
            packages: self
                .packages
                .iter()
                .map(|p| RawPackage {
                    name: p.name.clone(),
                    units: p
                        .units
                        .iter()
                        .map(|u| RawUnit {
                            name: u.name.clone(),
                            defines: u
                                .defined_symbols
                                .iter()
                                .map(|d| RawDef {
                                    name: d.name.clone(),
                                    kind: d.kind,
                                })
                                .collect(),
                            methods: u
                                .methods
                                .iter()
                                .map(|m| RawMethod {
                                    id: m.id.clone(),
                                    refs: m
                                        .references
                                        .iter()
                                        .map(|r| r.symbol_name.clone())
                                        .collect(),
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn separator(&self) -> char {
        self.separator
    }

    pub fn packages(&self) -> &[Package] {
        &self.packages
    }

    pub fn package(&self, name: &str) -> Option<&Package> {
        self.package_index(name).map(|i| &self.packages[i])
    }

    pub fn package_index(&self, name: &str) -> Option<usize> {
        self.package_lookup.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &SymbolDef> {
        self.packages.iter().flat_map(Package::symbols)
    }

    pub fn references(&self) -> impl Iterator<Item = &ReferenceSite> {
        self.packages.iter().flat_map(Package::references)
    }

    /// Packages defining `symbol`, in name order.
    pub fn definers(&self, symbol: &str) -> impl Iterator<Item = &str> {
        self.definitions
            .get(symbol)
            .into_iter()
            .flatten()
            .map(|&i| self.packages[i].name.as_str())
    }
}

/// Binds a reference to its definition, preferring the referencing package
/// and otherwise the lexicographically smallest definer.
pub fn resolve_reference(repo: &Repository, site: &ReferenceSite) -> Resolution {
    let Some(definers) = repo.definitions.get(&site.symbol_name) else {
        return Resolution::Unresolved;
    };
    let home = repo.package_index(&site.package_name);
    if home.is_some_and(|h| definers.contains(&h)) {
        Resolution::Internal
    } else {
        // `definers` is ascending and packages are name-sorted.
        Resolution::External(repo.packages[definers[0]].name.clone())
    }
}
