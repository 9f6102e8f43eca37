use std::collections::HashMap;
use std::sync::Arc;

use crate::corpus::Repository;

use super::related::related_packages;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    pub name: Arc<str>,
    pub package: usize,
}

/// Sorted symbol tables over an immutable repository.
///
/// Every table is ordered by name bytes (then package index), so all names
/// sharing a prefix form one contiguous run found by binary search.
#[derive(Debug, Clone)]
pub struct SymbolIndex {
    package_names: Vec<Arc<str>>,
    package_lookup: HashMap<String, usize>,
    global: Vec<IndexEntry>,
    per_package: Vec<Vec<IndexEntry>>,
    related: Vec<Vec<usize>>,
}

pub fn build_index(repo: &Repository) -> SymbolIndex {
    let package_names: Vec<Arc<str>> = repo
        .packages()
        .iter()
        .map(|p| Arc::from(p.name.as_str()))
        .collect();
    let package_lookup = repo
        .packages()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.name.clone(), i))
        .collect();

    let mut per_package: Vec<Vec<IndexEntry>> = repo
        .packages()
        .iter()
        .enumerate()
        .map(|(package, p)| {
            p.symbols()
                .map(|s| IndexEntry {
                    name: Arc::from(s.name.as_str()),
                    package,
                })
                .collect()
        })
        .collect();
    for table in &mut per_package {
        table.sort_by(|a, b| a.name.cmp(&b.name));
    }

    let mut global: Vec<IndexEntry> = per_package.iter().flatten().cloned().collect();
    global.sort_by(|a, b| a.name.cmp(&b.name).then(a.package.cmp(&b.package)));

    let related = repo
        .packages()
        .iter()
        .map(|p| {
            related_packages(repo, &p.name)
                .iter()
                .map(|name| repo.package_index(name).expect("related package exists"))
                .collect()
        })
        .collect();

    SymbolIndex {
        package_names,
        package_lookup,
        global,
        per_package,
        related,
    }
}

impl SymbolIndex {
    pub fn package_index(&self, name: &str) -> Option<usize> {
        self.package_lookup.get(name).copied()
    }

    pub fn package_name(&self, index: usize) -> &Arc<str> {
        &self.package_names[index]
    }

    pub fn package_count(&self) -> usize {
        self.package_names.len()
    }

    pub fn global(&self) -> &[IndexEntry] {
        &self.global
    }

    pub fn package_table(&self, index: usize) -> &[IndexEntry] {
        &self.per_package[index]
    }

    /// Related packages of `index`, nearest first.
    pub fn related(&self, index: usize) -> &[usize] {
        &self.related[index]
    }

    /// Case-sensitive prefix scan over the global table.
    pub fn scan_global<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a IndexEntry> {
        scan(&self.global, prefix)
    }

    pub fn scan_package<'a>(
        &'a self,
        index: usize,
        prefix: &'a str,
    ) -> impl Iterator<Item = &'a IndexEntry> {
        scan(&self.per_package[index], prefix)
    }
}

/// Start of the run of entries beginning with `prefix`.
pub(crate) fn lower_bound(table: &[IndexEntry], prefix: &str) -> usize {
    table.partition_point(|e| e.name.as_bytes() < prefix.as_bytes())
}

/// Entries of a name-sorted table that start with `prefix`, lazily.
pub(crate) fn scan<'a>(
    table: &'a [IndexEntry],
    prefix: &'a str,
) -> impl Iterator<Item = &'a IndexEntry> {
    table[lower_bound(table, prefix)..]
        .iter()
        .take_while(move |e| e.name.starts_with(prefix))
}
