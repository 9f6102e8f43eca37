//! Lazy candidate producers and the combinators that compose them.
//!
//! A fetcher is any `Iterator<Item = Candidate>`: it yields one candidate
//! per pull and does no work ahead of demand. Sources read contiguous runs of
//! a sorted [`SymbolIndex`](super::SymbolIndex) table; [`FetcherExt`] adds
//! the prefix filter and the de-duplicating decorator.

use std::cell::Cell;
use std::collections::HashSet;
use std::rc::Rc;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::index::{lower_bound, IndexEntry, SymbolIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    CurrentPackage,
    RelatedPackage,
    Global,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::CurrentPackage, Tier::RelatedPackage, Tier::Global];

    pub fn as_str(self) -> &'static str {
        match self {
            Tier::CurrentPackage => "current-package",
            Tier::RelatedPackage => "related-package",
            Tier::Global => "global",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub name: Arc<str>,
    pub origin_package: Arc<str>,
    pub tier: Tier,
}

/// Per-tier count of entries drawn from the index.
#[derive(Debug, Default)]
pub struct PullCounters {
    counts: [Cell<u64>; 3],
}

impl PullCounters {
    fn bump(&self, tier: Tier) {
        let cell = &self.counts[tier as usize];
        cell.set(cell.get() + 1);
    }

    pub fn get(&self, tier: Tier) -> u64 {
        self.counts[tier as usize].get()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(Cell::get).sum()
    }
}

/// `starts_with` predicate, byte-exact or ASCII case-folded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeginsWith {
    prefix: Rc<str>,
    case_sensitive: bool,
}

pub fn begins_with_filter(prefix: &str, case_sensitive: bool) -> BeginsWith {
    BeginsWith {
        prefix: Rc::from(prefix),
        case_sensitive,
    }
}

impl BeginsWith {
    pub fn matches(&self, name: &str) -> bool {
        let (name, prefix) = (name.as_bytes(), self.prefix.as_bytes());
        if self.case_sensitive {
            name.starts_with(prefix)
        } else {
            name.len() >= prefix.len() && name[..prefix.len()].eq_ignore_ascii_case(prefix)
        }
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn is_case_sensitive(&self) -> bool {
        self.case_sensitive
    }
}

/// Pull-driven reader over one index table.
///
/// In case-sensitive mode it binary-searches to the prefix run on the first
/// pull and stops at the end of the run. Case-folded prefixes do not map to
/// one run of a byte-sorted table, so that mode walks the whole table and
/// relies on a downstream filter.
pub struct TableSource<'a> {
    index: &'a SymbolIndex,
    table: &'a [IndexEntry],
    filter: BeginsWith,
    tier: Tier,
    counters: Rc<PullCounters>,
    cursor: Option<usize>,
}

impl<'a> TableSource<'a> {
    pub fn new(
        index: &'a SymbolIndex,
        table: &'a [IndexEntry],
        filter: BeginsWith,
        tier: Tier,
        counters: Rc<PullCounters>,
    ) -> Self {
        Self {
            index,
            table,
            filter,
            tier,
            counters,
            cursor: None,
        }
    }
}

impl Iterator for TableSource<'_> {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        let position = *self.cursor.get_or_insert_with(|| {
            if self.filter.case_sensitive {
                lower_bound(self.table, &self.filter.prefix)
            } else {
                0
            }
        });
        let entry = self.table.get(position)?;
        if self.filter.case_sensitive && !entry.name.starts_with(&*self.filter.prefix) {
            self.cursor = Some(self.table.len());
            return None;
        }
        self.cursor = Some(position + 1);
        self.counters.bump(self.tier);
        Some(Candidate {
            name: entry.name.clone(),
            origin_package: self.index.package_name(entry.package).clone(),
            tier: self.tier,
        })
    }
}

/// Decorator dropping candidates whose name was already produced.
pub struct Dedup<I> {
    inner: I,
    seen: HashSet<Arc<str>>,
}

impl<I: Iterator<Item = Candidate>> Iterator for Dedup<I> {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        loop {
            let candidate = self.inner.next()?;
            if self.seen.insert(candidate.name.clone()) {
                return Some(candidate);
            }
        }
    }
}

/// Keeps candidates accepted by a [`BeginsWith`] predicate.
pub struct Filtered<I> {
    inner: I,
    filter: BeginsWith,
}

impl<I: Iterator<Item = Candidate>> Iterator for Filtered<I> {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        let filter = &self.filter;
        self.inner.find(|c| filter.matches(&c.name))
    }
}

pub trait FetcherExt: Iterator<Item = Candidate> + Sized {
    fn begins_with(self, filter: BeginsWith) -> Filtered<Self> {
        Filtered {
            inner: self,
            filter,
        }
    }

    fn dedup_names(self) -> Dedup<Self> {
        Dedup {
            inner: self,
            seen: HashSet::new(),
        }
    }
}

impl<I: Iterator<Item = Candidate>> FetcherExt for I {}
