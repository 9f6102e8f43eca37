use serde::{Deserialize, Serialize};

use super::{resolve_reference, Repository, Resolution, SymbolKind};

/// Size and cohesion figures for a corpus.
///
/// `rho_int_global` is `r_int / (r_int + r_ext)` over the whole corpus, while
/// `rho_int_mean` averages the same ratio per package (packages without any
/// resolved reference are skipped). Both are reported since neither is
/// canonical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub package_count: usize,
    /// Units, whether or not they define a class.
    pub class_count: usize,
    /// Defined symbols of kind class.
    pub defined_class_count: usize,
    pub method_count: usize,
    pub r_int: usize,
    pub r_ext: usize,
    pub r_unresolved: usize,
    pub rho_int_global: f64,
    pub rho_int_mean: f64,
}

impl CorpusStats {
    pub fn reference_count(&self) -> usize {
        self.r_int + self.r_ext + self.r_unresolved
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn corpus_stats(repo: &Repository) -> CorpusStats {
    let mut r_int = 0;
    let mut r_ext = 0;
    let mut r_unresolved = 0;
    let mut per_package = Vec::new();

    for package in repo.packages() {
        let (mut int, mut ext) = (0, 0);
        for site in package.references() {
            match resolve_reference(repo, site) {
                Resolution::Internal => int += 1,
                Resolution::External(_) => ext += 1,
                Resolution::Unresolved => r_unresolved += 1,
            }
        }
        r_int += int;
        r_ext += ext;
        if int + ext > 0 {
            per_package.push(ratio(int, int + ext));
        }
    }

    let rho_int_mean = if per_package.is_empty() {
        0.0
    } else {
        per_package.iter().sum::<f64>() / per_package.len() as f64
    };

    CorpusStats {
        package_count: repo.packages().len(),
        class_count: repo.packages().iter().map(|p| p.units.len()).sum(),
        defined_class_count: repo
            .symbols()
            .filter(|s| s.kind == SymbolKind::ClassName)
            .count(),
        method_count: repo.packages().iter().map(|p| p.method_count()).sum(),
        r_int,
        r_ext,
        r_unresolved,
        rho_int_global: ratio(r_int, r_int + r_ext),
        rho_int_mean,
    }
}
