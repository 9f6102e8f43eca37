//! Seeded generator for package-structured corpora with controlled name
//! collisions and reference locality.
//!
//! Names are `Stem + Tail` (`KoluPresenter`). A colliding symbol shares its
//! stem with symbols of other packages, so short prefixes of one match the
//! others; tails within a stem family are distinct, which keeps every name
//! globally unique. References are internal with probability `p_int`,
//! realized by exact per-package quotas rather than coin flips.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::format::{RawDef, RawMethod, RawPackage, RawUnit};
use crate::corpus::{CorpusOptions, RawCorpus, Repository, SymbolKind};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid synthetic corpus spec: {0}")]
pub struct InvalidSpec(pub String);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub packages: usize,
    pub symbols_per_package: usize,
    /// Probability that a symbol joins a stem family spanning packages.
    pub collision_rate: f64,
    /// Target share of references resolving inside the referencing package.
    pub p_int: f64,
    /// Number of shared-root project groups packages are spread over.
    pub root_groups: usize,
    pub units_per_package: usize,
    pub methods_per_unit: usize,
    pub refs_per_method: usize,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            packages: 10,
            symbols_per_package: 20,
            collision_rate: 0.3,
            p_int: 0.3,
            root_groups: 3,
            units_per_package: 4,
            methods_per_unit: 5,
            refs_per_method: 3,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), InvalidSpec> {
        let fail = |m: &str| Err(InvalidSpec(m.to_owned()));
        if self.packages == 0 {
            return fail("at least one package is required");
        }
        if self.symbols_per_package == 0 {
            return fail("at least one symbol per package is required");
        }
        if self.units_per_package == 0 {
            return fail("at least one unit per package is required");
        }
        if self.root_groups == 0 || self.root_groups > self.packages {
            return fail("root groups must be between 1 and the package count");
        }
        for (name, value) in [
            ("collision rate", self.collision_rate),
            ("p_int", self.p_int),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(InvalidSpec(format!(
                    "{name} must lie in [0, 1], got {value}"
                )));
            }
        }
        if self.p_int < 1.0 && self.packages < 2 && self.refs_per_method > 0 {
            return fail("external references need at least two packages");
        }
        Ok(())
    }
}

const TAILS: [&str; 16] = [
    "Adapter",
    "Browser",
    "Builder",
    "Command",
    "Context",
    "Element",
    "Factory",
    "Handler",
    "Item",
    "Model",
    "Node",
    "Presenter",
    "Renderer",
    "Shape",
    "Visitor",
    "Widget",
];

const SUFFIXES: [&str; 8] = [
    "Core",
    "Model",
    "Tests",
    "UI",
    "Extension",
    "Support",
    "Kernel",
    "Tools",
];

const CONSONANTS: &[u8] = b"bcdfghklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

/// Draws unique capitalized pseudo-words of two or three syllables.
struct StemSource {
    used: HashSet<String>,
}

impl StemSource {
    fn draw(&mut self, rng: &mut ChaCha8Rng) -> String {
        loop {
            let syllables = if rng.gen_bool(0.7) { 2 } else { 3 };
            let mut stem = String::with_capacity(6);
            for _ in 0..syllables {
                stem.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char);
                stem.push(VOWELS[rng.gen_range(0..VOWELS.len())] as char);
            }
            let stem = capitalize(&stem);
            if self.used.insert(stem.clone()) {
                return stem;
            }
        }
    }
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

struct Family {
    stem: String,
    packages: Vec<usize>,
    free_tails: Vec<usize>,
}

/// Generates the raw form of a corpus. Same spec and seed, same output.
pub fn generate_raw(spec: &SyntheticSpec, seed: u64) -> Result<RawCorpus, InvalidSpec> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stems = StemSource {
        used: HashSet::new(),
    };

    let roots: Vec<String> = (0..spec.root_groups)
        .map(|_| stems.draw(&mut rng))
        .collect();
    let package_names: Vec<String> = (0..spec.packages)
        .map(|i| {
            let group = i % spec.root_groups;
            let slot = i / spec.root_groups;
            let suffix = SUFFIXES[slot % SUFFIXES.len()];
            match slot / SUFFIXES.len() {
                0 => format!("{}-{suffix}", roots[group]),
                n => format!("{}-{suffix}{n}", roots[group]),
            }
        })
        .collect();

    // Symbol names per package.
    let mut families: Vec<Family> = Vec::new();
    let mut symbols: Vec<Vec<String>> = Vec::with_capacity(spec.packages);
    for package in 0..spec.packages {
        let mut names = Vec::with_capacity(spec.symbols_per_package);
        for _ in 0..spec.symbols_per_package {
            let collide = spec.collision_rate > 0.0 && rng.gen_bool(spec.collision_rate);
            let name = if collide {
                let open: Vec<usize> = families
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| !f.packages.contains(&package) && !f.free_tails.is_empty())
                    .map(|(i, _)| i)
                    .collect();
                let family = if open.is_empty() || rng.gen_bool(1.0 / 3.0) {
                    let mut free_tails: Vec<usize> = (0..TAILS.len()).collect();
                    free_tails.shuffle(&mut rng);
                    families.push(Family {
                        stem: stems.draw(&mut rng),
                        packages: Vec::new(),
                        free_tails,
                    });
                    families.len() - 1
                } else {
                    open[rng.gen_range(0..open.len())]
                };
                let family = &mut families[family];
                family.packages.push(package);
                let tail = family
                    .free_tails
                    .pop()
                    .expect("open family has a free tail");
                format!("{}{}", family.stem, TAILS[tail])
            } else {
                format!(
                    "{}{}",
                    stems.draw(&mut rng),
                    TAILS[rng.gen_range(0..TAILS.len())]
                )
            };
            names.push(name);
        }
        symbols.push(names);
    }

    let all_symbols: Vec<(usize, &str)> = symbols
        .iter()
        .enumerate()
        .flat_map(|(p, names)| names.iter().map(move |n| (p, n.as_str())))
        .collect();

    let mut packages = Vec::with_capacity(spec.packages);
    for (package, name) in package_names.iter().enumerate() {
        let ref_count = spec.units_per_package * spec.methods_per_unit * spec.refs_per_method;
        let internal = (spec.p_int * ref_count as f64).round() as usize;
        let mut internal_flags: Vec<bool> = (0..ref_count).map(|i| i < internal).collect();
        internal_flags.shuffle(&mut rng);
        let foreign: Vec<&str> = all_symbols
            .iter()
            .filter(|(p, _)| *p != package)
            .map(|(_, n)| *n)
            .collect();
        let mut targets = internal_flags.into_iter().map(|is_internal| {
            if is_internal || foreign.is_empty() {
                symbols[package][rng.gen_range(0..symbols[package].len())].clone()
            } else {
                foreign[rng.gen_range(0..foreign.len())].to_owned()
            }
        });

        let mut units: Vec<RawUnit> = (0..spec.units_per_package)
            .map(|_| RawUnit {
                name: String::new(),
                defines: Vec::new(),
                methods: (0..spec.methods_per_unit)
                    .map(|m| RawMethod {
                        id: format!("method{m}"),
                        refs: Vec::new(),
                    })
                    .collect(),
            })
            .collect();
        for (i, symbol) in symbols[package].iter().enumerate() {
            let kind = if i % 5 == 4 {
                SymbolKind::GlobalVariable
            } else {
                SymbolKind::ClassName
            };
            units[i % spec.units_per_package].defines.push(RawDef {
                name: symbol.clone(),
                kind,
            });
        }
        for (u, unit) in units.iter_mut().enumerate() {
            unit.name = match unit.defines.first() {
                Some(def) => def.name.clone(),
                None => format!("Extension{u}"),
            };
            for method in &mut unit.methods {
                method.refs = targets.by_ref().take(spec.refs_per_method).collect();
            }
        }
        packages.push(RawPackage {
            name: name.clone(),
            units,
        });
    }

    Ok(RawCorpus {
        name: format!("synthetic-{seed}"),
        packages,
    })
}

pub fn generate_synthetic_corpus(
    spec: &SyntheticSpec,
    seed: u64,
) -> Result<Repository, InvalidSpec> {
    let raw = generate_raw(spec, seed)?;
    Repository::from_raw(raw, &CorpusOptions::default())
        .map_err(|err| InvalidSpec(format!("generated corpus is invalid: {err}")))
}
