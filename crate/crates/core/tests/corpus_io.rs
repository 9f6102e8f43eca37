use std::fs;
use std::path::Path;

use proptest::prelude::*;
use scopecomplete::bench::{generate_raw, SyntheticSpec};
use scopecomplete::corpus::format::{write_dir, write_single_file};
use scopecomplete::corpus::{
    corpus_stats, extract_benchmark_cases, load_corpus, resolve_reference, CaseFilter, CorpusError,
    CorpusOptions, PrefixRange, Repository, Resolution,
};

fn write(path: &Path, text: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

fn minimal_tree(root: &Path) {
    write(
        &root.join("core/package.json"),
        r#"{"name": "P1-Core", "units": ["Alpha.json"]}"#,
    );
    write(
        &root.join("core/Alpha.json"),
        r#"{"name": "Alpha", "defines": [{"name": "Alpha", "kind": "class"}],
            "methods": [{"id": "run", "refs": ["Alpha"]}]}"#,
    );
}

#[test]
fn loads_minimal_directory() {
    let dir = tempfile::tempdir().unwrap();
    minimal_tree(dir.path());
    let repo = load_corpus(dir.path(), &CorpusOptions::default()).unwrap();
    assert_eq!(repo.packages().len(), 1);
    assert_eq!(repo.packages()[0].name, "P1-Core");
    assert_eq!(repo.symbols().count(), 1);
    assert_eq!(repo.references().count(), 1);
}

#[test]
fn loads_single_file_variant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("demo.corpus.json");
    write(
        &path,
        r#"{"name": "demo", "packages": [
            {"name": "P1-Core", "units": [{"name": "A", "defines": [{"name": "Alpha", "kind": "global"}]}]},
            {"name": "P1-Test", "units": [{"name": "T", "methods": [{"id": "m", "refs": ["Alpha", "Ghost"]}]}]}
        ]}"#,
    );
    let repo = load_corpus(&path, &CorpusOptions::default()).unwrap();
    assert_eq!(repo.name(), "demo");
    let refs: Vec<_> = repo
        .references()
        .map(|r| resolve_reference(&repo, r))
        .collect();
    assert_eq!(
        refs,
        [
            Resolution::External("P1-Core".into()),
            Resolution::Unresolved
        ]
    );
}

#[test]
fn error_paths() {
    let dir = tempfile::tempdir().unwrap();
    let opts = CorpusOptions::default();

    assert!(matches!(
        load_corpus(&dir.path().join("missing"), &opts),
        Err(CorpusError::Io { .. })
    ));

    let empty = dir.path().join("empty");
    fs::create_dir_all(&empty).unwrap();
    assert!(matches!(
        load_corpus(&empty, &opts),
        Err(CorpusError::EmptyCorpus)
    ));

    let broken = dir.path().join("broken");
    write(
        &broken.join("p/package.json"),
        r#"{"name": "P", "units": ["U.json"]"#,
    );
    assert!(matches!(
        load_corpus(&broken, &opts),
        Err(CorpusError::Malformed { .. })
    ));

    let dup = dir.path().join("dup");
    for sub in ["a", "b"] {
        write(
            &dup.join(sub).join("package.json"),
            r#"{"name": "P1-Core", "units": []}"#,
        );
    }
    assert!(
        matches!(load_corpus(&dup, &opts), Err(CorpusError::DuplicatePackage(p)) if p == "P1-Core")
    );

    let missing_unit = dir.path().join("missing-unit");
    write(
        &missing_unit.join("p/package.json"),
        r#"{"name": "P", "units": ["Nope.json"]}"#,
    );
    assert!(matches!(
        load_corpus(&missing_unit, &opts),
        Err(CorpusError::Io { .. })
    ));
}

#[test]
fn non_package_directories_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    minimal_tree(dir.path());
    fs::create_dir_all(dir.path().join(".git/objects")).unwrap();
    write(&dir.path().join("README.txt"), "notes");
    let repo = load_corpus(dir.path(), &CorpusOptions::default()).unwrap();
    assert_eq!(repo.packages().len(), 1);
}

#[test]
fn directory_and_single_file_agree() {
    let raw = generate_raw(&SyntheticSpec::default(), 5).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("synthetic-5");
    write_dir(&raw, &tree).unwrap();
    let file = dir.path().join("synthetic-5.corpus.json");
    write_single_file(&raw, &file).unwrap();

    let opts = CorpusOptions::default();
    let from_tree = load_corpus(&tree, &opts).unwrap();
    let from_file = load_corpus(&file, &opts).unwrap();
    assert_eq!(from_tree, from_file);
    assert_eq!(
        from_tree,
        load_corpus(&tree, &opts).unwrap(),
        "loading is deterministic"
    );
    assert_eq!(from_tree, Repository::from_raw(raw, &opts).unwrap());
}

fn shuffled_raw(seed: u64, rotate: usize) -> scopecomplete::corpus::RawCorpus {
    let mut raw = generate_raw(
        &SyntheticSpec {
            packages: 6,
            root_groups: 2,
            ..SyntheticSpec::default()
        },
        seed,
    )
    .unwrap();
    let n = raw.packages.len();
    raw.packages.rotate_left(rotate % n);
    for package in &mut raw.packages {
        package.units.reverse();
        for unit in &mut package.units {
            unit.defines.reverse();
            unit.methods.reverse();
        }
    }
    raw
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn canonical_under_reordering(seed in 0u64..1000, rotate in 0usize..6) {
        let opts = CorpusOptions::default();
        let base = Repository::from_raw(generate_raw(&SyntheticSpec { packages: 6, root_groups: 2, ..SyntheticSpec::default() }, seed).unwrap(), &opts).unwrap();
        let moved = Repository::from_raw(shuffled_raw(seed, rotate), &opts).unwrap();
        prop_assert_eq!(&base, &moved);
        let a: Vec<_> = base.references().map(|r| resolve_reference(&base, r)).collect();
        let b: Vec<_> = moved.references().map(|r| resolve_reference(&moved, r)).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reference_counts_partition(seed in 0u64..1000) {
        let spec = SyntheticSpec { p_int: (seed % 11) as f64 / 10.0, ..SyntheticSpec::default() };
        let repo = Repository::from_raw(generate_raw(&spec, seed).unwrap(), &CorpusOptions::default()).unwrap();
        let stats = corpus_stats(&repo);
        // Brute-force recount straight from the definitions.
        let (mut int, mut ext, mut unresolved) = (0, 0, 0);
        for site in repo.references() {
            let definers: Vec<_> = repo.definers(&site.symbol_name).collect();
            if definers.is_empty() { unresolved += 1 }
            else if definers.contains(&site.package_name.as_str()) { int += 1 }
            else { ext += 1 }
        }
        prop_assert_eq!((stats.r_int, stats.r_ext, stats.r_unresolved), (int, ext, unresolved));
        prop_assert_eq!(stats.reference_count(), repo.references().count());
        prop_assert!((0.0..=1.0).contains(&stats.rho_int_global));
        prop_assert!((0.0..=1.0).contains(&stats.rho_int_mean));
    }

    #[test]
    fn case_count_formula(names in proptest::collection::vec("[A-Za-z][A-Za-z0-9]{0,14}", 1..20)) {
        let raw = scopecomplete::corpus::RawCorpus {
            name: "p".into(),
            packages: vec![scopecomplete::corpus::format::RawPackage {
                name: "P".into(),
                units: vec![scopecomplete::corpus::format::RawUnit {
                    name: "U".into(),
                    defines: vec![],
                    methods: vec![scopecomplete::corpus::format::RawMethod { id: "m".into(), refs: names.clone() }],
                }],
            }],
        };
        let repo = Repository::from_raw(raw, &CorpusOptions::default()).unwrap();
        let cases = extract_benchmark_cases(&repo, &CaseFilter::All, PrefixRange::default());
        let expected: usize = names
            .iter()
            .filter(|n| n.chars().next().unwrap().is_uppercase())
            .map(|n| n.chars().count().min(8).saturating_sub(1))
            .sum();
        prop_assert_eq!(cases.len(), expected);
        for case in &cases {
            prop_assert!(case.target_name.starts_with(&case.prefix));
            prop_assert_eq!(case.prefix.chars().count(), case.prefix_length);
        }
    }
}
