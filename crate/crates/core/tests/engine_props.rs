mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use scopecomplete::bench::{generate_synthetic_corpus, SyntheticSpec};
use scopecomplete::corpus::Repository;
use scopecomplete::engine::{
    build_index, make_pipeline, CompletionContext, Strategy, SymbolIndex, Tier,
};

use common::{eager_order, small_spec};

fn prefixes_for(repo: &Repository) -> Vec<String> {
    // Prefixes of defined names plus a few that match nothing.
    let mut out: Vec<String> = repo
        .symbols()
        .flat_map(|s| (1..=3).filter_map(move |n| s.name.get(..n).map(str::to_owned)))
        .collect();
    out.extend(["Zz".to_owned(), "Q".to_owned(), String::new()]);
    out.sort();
    out.dedup();
    out
}

fn lazy_names(
    index: &SymbolIndex,
    ctx: &CompletionContext,
    strategy: Strategy,
    k: usize,
) -> Vec<(String, Tier)> {
    let mut rs = make_pipeline(ctx, strategy, index).unwrap();
    rs.top(k)
        .iter()
        .map(|c| (c.name.to_string(), c.tier))
        .collect()
}

fn tier_code(tier: Tier) -> u8 {
    match tier {
        Tier::CurrentPackage => 0,
        Tier::RelatedPackage => 1,
        Tier::Global => 2,
    }
}

#[test]
fn pipeline_equals_eager_construction() {
    for seed in 0..100u64 {
        let repo = generate_synthetic_corpus(&small_spec(seed), seed).unwrap();
        let index = build_index(&repo);
        let prefixes = prefixes_for(&repo);
        for package in repo.packages() {
            for prefix in prefixes.iter().step_by(3) {
                for case_sensitive in [true, false] {
                    let ctx = CompletionContext::new(package.name.clone(), prefix.clone())
                        .case_sensitive(case_sensitive);
                    for strategy in [Strategy::FlatGlobal, Strategy::PackageAware] {
                        let expected =
                            eager_order(&repo, &package.name, prefix, case_sensitive, strategy);
                        let got = lazy_names(&index, &ctx, strategy, usize::MAX);
                        let got: Vec<(String, u8)> = got
                            .into_iter()
                            .map(|(n, t)| {
                                (
                                    n,
                                    if strategy == Strategy::FlatGlobal {
                                        2
                                    } else {
                                        tier_code(t)
                                    },
                                )
                            })
                            .collect();
                        assert_eq!(
                            got, expected,
                            "seed {seed} {} {prefix:?} {strategy}",
                            package.name
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn prefix_scan_matches_linear_filter() {
    let spec = SyntheticSpec {
        packages: 50,
        symbols_per_package: 200,
        collision_rate: 0.4,
        root_groups: 10,
        refs_per_method: 0,
        ..SyntheticSpec::default()
    };
    let repo = generate_synthetic_corpus(&spec, 99).unwrap();
    assert_eq!(repo.symbols().count(), 10_000);
    let index = build_index(&repo);
    for prefix in ["Sp", "Ka", "B", "Zu", "Ma", "Xx", "Tob"] {
        let mut scanned: Vec<&str> = index.scan_global(prefix).map(|e| &*e.name).collect();
        let mut brute: Vec<&str> = repo
            .symbols()
            .map(|s| s.name.as_str())
            .filter(|n| n.starts_with(prefix))
            .collect();
        scanned.sort_unstable();
        brute.sort_unstable();
        assert_eq!(scanned, brute, "{prefix}");
    }
}

#[test]
fn laziness_bound_on_generated_contexts() {
    let mut checked = 0;
    for seed in 0..5u64 {
        let spec = SyntheticSpec {
            packages: 8,
            symbols_per_package: 300,
            root_groups: 3,
            refs_per_method: 0,
            ..SyntheticSpec::default()
        };
        let repo = generate_synthetic_corpus(&spec, seed).unwrap();
        let index = build_index(&repo);
        for package in repo.packages() {
            let local: Vec<&str> = package.symbols().map(|s| s.name.as_str()).collect();
            let mut prefixes: Vec<&str> = local.iter().flat_map(|n| [&n[..1], &n[..2]]).collect();
            prefixes.sort_unstable();
            prefixes.dedup();
            for prefix in prefixes {
                if local.iter().filter(|n| n.starts_with(prefix)).count() < 10 {
                    continue;
                }
                let ctx = CompletionContext::new(package.name.clone(), prefix);
                let mut rs = make_pipeline(&ctx, Strategy::PackageAware, &index).unwrap();
                rs.top(10);
                assert_eq!(rs.pulled(Tier::Global), 0);
                assert_eq!(rs.pulled(Tier::RelatedPackage), 0);
                assert_eq!(rs.pulled(Tier::CurrentPackage), 10);
                checked += 1;
            }
        }
    }
    assert!(checked >= 100, "only {checked} contexts");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ranked_lists_are_well_formed(seed in 0u64..10_000, k in 1usize..25) {
        let repo = generate_synthetic_corpus(&small_spec(seed), seed).unwrap();
        let index = build_index(&repo);
        for package in repo.packages() {
            for prefix in prefixes_for(&repo).iter().take(12) {
                let ctx = CompletionContext::new(package.name.clone(), prefix.clone());
                let aware = lazy_names(&index, &ctx, Strategy::PackageAware, k);
                prop_assert!(aware.len() <= k);

                let mut seen = HashSet::new();
                prop_assert!(aware.iter().all(|(n, _)| seen.insert(n.clone())), "duplicate name");
                let tiers: Vec<Tier> = aware.iter().map(|(_, t)| *t).collect();
                prop_assert!(tiers.windows(2).all(|w| w[0] <= w[1]), "tiers out of order: {:?}", tiers);
                prop_assert!(aware.iter().all(|(n, _)| n.starts_with(prefix.as_str())));

                prop_assert_eq!(&aware, &lazy_names(&index, &ctx, Strategy::PackageAware, k), "deterministic");

                let flat = lazy_names(&index, &ctx, Strategy::FlatGlobal, k);
                prop_assert!(flat.windows(2).all(|w| w[0].0.as_bytes() < w[1].0.as_bytes()));
            }
        }
    }

    #[test]
    fn local_targets_never_rank_worse(seed in 0u64..10_000) {
        let repo = generate_synthetic_corpus(&small_spec(seed), seed).unwrap();
        let index = build_index(&repo);
        for package in repo.packages() {
            for symbol in package.symbols() {
                for n in 1..=symbol.name.len().min(4) {
                    let ctx = CompletionContext::new(package.name.clone(), &symbol.name[..n]);
                    let mut aware = make_pipeline(&ctx, Strategy::PackageAware, &index).unwrap();
                    let mut flat = make_pipeline(&ctx, Strategy::FlatGlobal, &index).unwrap();
                    let a = aware.rank_of(&symbol.name, usize::MAX).unwrap();
                    let f = flat.rank_of(&symbol.name, usize::MAX).unwrap();
                    prop_assert!(a <= f, "{} {}: aware {} flat {}", package.name, symbol.name, a, f);
                }
            }
        }
    }
}
