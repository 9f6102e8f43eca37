use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{starts_uppercase, Package, ReferenceSite, Repository};

/// Inclusive range of prefix lengths to mask names to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixRange {
    pub min: usize,
    pub max: usize,
}

impl PrefixRange {
    pub const fn new(min: usize, max: usize) -> Self {
        Self { min, max }
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + Clone {
        self.min..=self.max
    }

    /// Prefix lengths that apply to a name of `len` characters.
    pub fn lengths_for(&self, len: usize) -> std::ops::RangeInclusive<usize> {
        self.min..=self.max.min(len)
    }
}

impl Default for PrefixRange {
    fn default() -> Self {
        Self::new(2, 8)
    }
}

impl fmt::Display for PrefixRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

impl FromStr for PrefixRange {
    type Err = String;

    /// Parses `2..8` (inclusive) or a single length.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid prefix length `{t}`"))
        };
        let (min, max) = match s.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        Ok(Self::new(min, max))
    }
}

/// Which packages contribute benchmark cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CaseFilter {
    All,
    Named { packages: Vec<String> },
    Tests { marker: String },
    NonTests { marker: String },
}

impl CaseFilter {
    pub fn selects(&self, package: &Package) -> bool {
        match self {
            CaseFilter::All => true,
            CaseFilter::Named { packages } => packages.contains(&package.name),
            CaseFilter::Tests { marker } => package.name.contains(marker.as_str()),
            CaseFilter::NonTests { marker } => !package.name.contains(marker.as_str()),
        }
    }
}

/// One masked completion query: recover `target_name` from `prefix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkCase {
    pub site: ReferenceSite,
    pub target_name: String,
    pub prefix: String,
    /// Length of `prefix` in characters.
    pub prefix_length: usize,
}

impl BenchmarkCase {
    /// True when the prefix is the whole name.
    pub fn is_full_name(&self) -> bool {
        self.prefix.len() == self.target_name.len()
    }
}

/// Masks every uppercase-initial reference in the selected packages to each
/// applicable prefix length. Cases come out ordered by package, unit,
/// method, ordinal and prefix length.
pub fn extract_benchmark_cases(
    repo: &Repository,
    filter: &CaseFilter,
    range: PrefixRange,
) -> Vec<BenchmarkCase> {
    let mut cases = Vec::new();
    for package in repo.packages().iter().filter(|p| filter.selects(p)) {
        for site in package.references() {
            if !starts_uppercase(&site.symbol_name) {
                continue;
            }
            let boundaries: Vec<usize> = site
                .symbol_name
                .char_indices()
                .map(|(i, _)| i)
                .skip(1)
                .chain(std::iter::once(site.symbol_name.len()))
                .collect();
            for length in range.lengths_for(boundaries.len()) {
                if length == 0 {
                    continue;
                }
                cases.push(BenchmarkCase {
                    site: site.clone(),
                    target_name: site.symbol_name.clone(),
                    prefix: site.symbol_name[..boundaries[length - 1]].to_owned(),
                    prefix_length: length,
                });
            }
        }
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::super::tests::unit;
    use super::super::{format::RawPackage, CorpusOptions, RawCorpus};
    use super::*;

    fn single(refs: &[&str]) -> Repository {
        let raw = RawCorpus {
            name: "t".into(),
            packages: vec![RawPackage {
                name: "P".into(),
                units: vec![unit("U", &[], &[("m", refs)])],
            }],
        };
        Repository::from_raw(raw, &CorpusOptions::default()).unwrap()
    }

    fn prefixes(refs: &[&str]) -> Vec<String> {
        extract_benchmark_cases(&single(refs), &CaseFilter::All, PrefixRange::default())
            .into_iter()
            .map(|c| c.prefix)
            .collect()
    }

    #[test]
    fn ordered_collection_prefixes() {
        assert_eq!(
            prefixes(&["OrderedCollection"]),
            ["Or", "Ord", "Orde", "Order", "Ordere", "Ordered", "OrderedC"]
        );
    }

    #[test]
    fn short_and_lowercase_names() {
        assert_eq!(prefixes(&["Ab"]), ["Ab"]);
        assert!(prefixes(&["count"]).is_empty());
        assert!(prefixes(&["X"]).is_empty());
    }

    #[test]
    fn full_name_flag() {
        let cases =
            extract_benchmark_cases(&single(&["Abc"]), &CaseFilter::All, PrefixRange::default());
        let flags: Vec<_> = cases.iter().map(BenchmarkCase::is_full_name).collect();
        assert_eq!(flags, [false, true]);
    }

    #[test]
    fn multibyte_names_cut_on_char_boundaries() {
        assert_eq!(prefixes(&["Ébène"]), ["Éb", "Ébè", "Ébèn", "Ébène"]);
    }

    #[test]
    fn narrower_range() {
        let cases = extract_benchmark_cases(
            &single(&["OrderedCollection"]),
            &CaseFilter::All,
            PrefixRange::new(2, 4),
        );
        assert_eq!(cases.len(), 3);
    }

    #[test]
    fn prefix_range_parsing() {
        assert_eq!(
            "2..8".parse::<PrefixRange>().unwrap(),
            PrefixRange::new(2, 8)
        );
        assert_eq!(
            "3..=5".parse::<PrefixRange>().unwrap(),
            PrefixRange::new(3, 5)
        );
        assert_eq!("4".parse::<PrefixRange>().unwrap(), PrefixRange::new(4, 4));
        assert!("a..b".parse::<PrefixRange>().is_err());
    }

    #[test]
    fn filters() {
        let make = |name: &str| Package {
            name: name.into(),
            units: vec![],
        };
        let tests = CaseFilter::Tests {
            marker: "Test".into(),
        };
        assert!(tests.selects(&make("Spec2-Tests")));
        assert!(!tests.selects(&make("Spec2-Core")));
        let named = CaseFilter::Named {
            packages: vec!["A".into()],
        };
        assert!(named.selects(&make("A")));
        assert!(!named.selects(&make("B")));
    }
}
