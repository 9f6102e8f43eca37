//! Completion engine: a sorted symbol index and lazy, tiered candidate
//! pipelines over it.
//!
//! The index is immutable and can be shared across threads. A [`ResultSet`]
//! belongs to one query and one thread.

mod fetcher;
mod index;
mod pipeline;
mod related;

use thiserror::Error;

pub use fetcher::{
    begins_with_filter, BeginsWith, Candidate, Dedup, FetcherExt, Filtered, PullCounters,
    TableSource, Tier,
};
pub use index::{build_index, IndexEntry, SymbolIndex};
pub use pipeline::{make_pipeline, CompletionContext, ResultSet, Strategy};
pub use related::{related_packages, shared_segments};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unknown package `{0}`")]
    UnknownPackage(String),
}
