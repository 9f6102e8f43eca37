//! Eager reference ranking used to check the lazy engine.
//!
//! Works straight off the repository: filters the whole namespace, assigns
//! tiers, stable-sorts and de-duplicates. It shares no code with the index
//! or the fetchers.

#![allow(dead_code)]

use std::collections::HashMap;

use scopecomplete::bench::SyntheticSpec;
use scopecomplete::corpus::{BenchmarkCase, Repository};
use scopecomplete::engine::Strategy;

fn shared_prefix_segments(a: &str, b: &str, separator: char) -> usize {
    let a: Vec<&str> = a.split(separator).collect();
    let b: Vec<&str> = b.split(separator).collect();
    let mut n = 0;
    while n < a.len() && n < b.len() && a[n] == b[n] {
        n += 1;
    }
    n
}

pub fn oracle_related(repo: &Repository, package: &str) -> Vec<String> {
    let mut scored: Vec<(usize, String)> = Vec::new();
    for other in repo.packages() {
        if other.name == package {
            continue;
        }
        let depth = shared_prefix_segments(package, &other.name, repo.separator());
        if depth >= 1 {
            scored.push((depth, other.name.clone()));
        }
    }
    scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    scored.into_iter().map(|(_, n)| n).collect()
}

fn matches(name: &str, prefix: &str, case_sensitive: bool) -> bool {
    if case_sensitive {
        name.starts_with(prefix)
    } else {
        name.to_ascii_lowercase()
            .starts_with(&prefix.to_ascii_lowercase())
    }
}

/// Full candidate order as `(name, tier)` with tier 0 = current package,
/// 1 = related, 2 = global.
pub fn eager_order(
    repo: &Repository,
    package: &str,
    prefix: &str,
    case_sensitive: bool,
    strategy: Strategy,
) -> Vec<(String, u8)> {
    let related = oracle_related(repo, package);
    let mut keyed: Vec<(u8, usize, String)> = Vec::new();
    for p in repo.packages() {
        for symbol in p.symbols() {
            if !matches(&symbol.name, prefix, case_sensitive) {
                continue;
            }
            let key = match strategy {
                Strategy::FlatGlobal => (2, 0),
                Strategy::PackageAware => {
                    if p.name == package {
                        (0, 0)
                    } else if let Some(pos) = related.iter().position(|r| *r == p.name) {
                        (1, pos)
                    } else {
                        (2, 0)
                    }
                }
            };
            keyed.push((key.0, key.1, symbol.name.clone()));
        }
    }
    keyed.sort_by(|a, b| {
        (a.0, a.1)
            .cmp(&(b.0, b.1))
            .then_with(|| a.2.as_bytes().cmp(b.2.as_bytes()))
    });
    let mut seen = std::collections::HashSet::new();
    keyed
        .into_iter()
        .filter(|(_, _, name)| seen.insert(name.clone()))
        .map(|(tier, _, name)| (name, tier))
        .collect()
}

pub fn eager_rank(order: &[(String, u8)], target: &str, k: usize) -> Option<usize> {
    order
        .iter()
        .take(k)
        .position(|(name, _)| name == target)
        .map(|i| i + 1)
}

/// Oracle ranks for every case, memoized per (package, prefix).
pub fn oracle_ranks(
    repo: &Repository,
    cases: &[BenchmarkCase],
    strategy: Strategy,
    k: usize,
    case_sensitive: bool,
) -> Vec<Option<usize>> {
    let mut memo: HashMap<(String, String), Vec<(String, u8)>> = HashMap::new();
    cases
        .iter()
        .map(|case| {
            let order = memo
                .entry((case.site.package_name.clone(), case.prefix.clone()))
                .or_insert_with(|| {
                    eager_order(
                        repo,
                        &case.site.package_name,
                        &case.prefix,
                        case_sensitive,
                        strategy,
                    )
                });
            eager_rank(order, &case.target_name, k)
        })
        .collect()
}

/// Small random spec for sweeps, drawn from the seed itself.
pub fn small_spec(seed: u64) -> SyntheticSpec {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let packages = rng.gen_range(2..=16);
    SyntheticSpec {
        packages,
        symbols_per_package: rng.gen_range(3..=30),
        collision_rate: rng.gen_range(0.0..=1.0),
        p_int: rng.gen_range(0.0..=1.0),
        root_groups: rng.gen_range(1..=packages),
        units_per_package: rng.gen_range(1..=4),
        methods_per_unit: rng.gen_range(1..=3),
        refs_per_method: rng.gen_range(1..=3),
    }
}
