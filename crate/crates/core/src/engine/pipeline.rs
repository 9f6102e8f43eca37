use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::fetcher::{begins_with_filter, Candidate, FetcherExt, PullCounters, TableSource, Tier};
use super::index::SymbolIndex;
use super::EngineError;

/// Ranking strategy. Both order ties by name bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// One lexicographic list over every global name.
    FlatGlobal,
    /// Current package, then related packages, then everything else.
    PackageAware,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::FlatGlobal => "flat-global",
            Strategy::PackageAware => "package-aware",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flat-global" | "flat" | "without" => Ok(Strategy::FlatGlobal),
            "package-aware" | "package" | "with" => Ok(Strategy::PackageAware),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionContext {
    pub requesting_package: String,
    /// May be empty, in which case every name matches.
    pub prefix: String,
    pub case_sensitive: bool,
}

impl CompletionContext {
    pub fn new(requesting_package: impl Into<String>, prefix: impl Into<String>) -> Self {
        Self {
            requesting_package: requesting_package.into(),
            prefix: prefix.into(),
            case_sensitive: true,
        }
    }

    pub fn case_sensitive(mut self, yes: bool) -> Self {
        self.case_sensitive = yes;
        self
    }
}

/// Caching front of a candidate pipeline.
///
/// Candidates are pulled from the fetcher only when a caller asks for more
/// than the cache holds, and the cache only ever grows, so earlier answers
/// stay valid prefixes of later ones.
pub struct ResultSet<'a> {
    source: Box<dyn Iterator<Item = Candidate> + 'a>,
    cache: Vec<Candidate>,
    exhausted: bool,
    counters: Rc<PullCounters>,
}

impl<'a> ResultSet<'a> {
    pub fn new(
        source: Box<dyn Iterator<Item = Candidate> + 'a>,
        counters: Rc<PullCounters>,
    ) -> Self {
        Self {
            source,
            cache: Vec::new(),
            exhausted: false,
            counters,
        }
    }

    fn fill(&mut self, k: usize) {
        while !self.exhausted && self.cache.len() < k {
            match self.source.next() {
                Some(candidate) => self.cache.push(candidate),
                None => self.exhausted = true,
            }
        }
    }

    /// The first `k` candidates in pipeline order (fewer if exhausted).
    pub fn top(&mut self, k: usize) -> &[Candidate] {
        self.fill(k);
        &self.cache[..k.min(self.cache.len())]
    }

    /// 1-based position of `target` within the first `k` candidates.
    pub fn rank_of(&mut self, target: &str, k: usize) -> Option<usize> {
        self.top(k)
            .iter()
            .position(|c| &*c.name == target)
            .map(|i| i + 1)
    }

    pub fn cached(&self) -> &[Candidate] {
        &self.cache
    }

    pub fn pulled(&self, tier: Tier) -> u64 {
        self.counters.get(tier)
    }

    pub fn pulled_total(&self) -> u64 {
        self.counters.total()
    }
}

/// Builds the lazy candidate pipeline for one completion request.
pub fn make_pipeline<'a>(
    ctx: &CompletionContext,
    strategy: Strategy,
    index: &'a SymbolIndex,
) -> Result<ResultSet<'a>, EngineError> {
    let home = index
        .package_index(&ctx.requesting_package)
        .ok_or_else(|| EngineError::UnknownPackage(ctx.requesting_package.clone()))?;
    let filter = begins_with_filter(&ctx.prefix, ctx.case_sensitive);
    let counters = Rc::new(PullCounters::default());

    let source: Box<dyn Iterator<Item = Candidate> + 'a> = match strategy {
        Strategy::FlatGlobal => Box::new(
            TableSource::new(
                index,
                index.global(),
                filter.clone(),
                Tier::Global,
                counters.clone(),
            )
            .begins_with(filter)
            .dedup_names(),
        ),
        Strategy::PackageAware => {
            let current = TableSource::new(
                index,
                index.package_table(home),
                filter.clone(),
                Tier::CurrentPackage,
                counters.clone(),
            );
            let related = {
                let filter = filter.clone();
                let counters = counters.clone();
                index.related(home).iter().flat_map(move |&package| {
                    TableSource::new(
                        index,
                        index.package_table(package),
                        filter.clone(),
                        Tier::RelatedPackage,
                        counters.clone(),
                    )
                })
            };
            let global = TableSource::new(
                index,
                index.global(),
                filter.clone(),
                Tier::Global,
                counters.clone(),
            );
            Box::new(
                current
                    .chain(related)
                    .chain(global)
                    .begins_with(filter)
                    .dedup_names(),
            )
        }
    };

    Ok(ResultSet::new(source, counters))
}
