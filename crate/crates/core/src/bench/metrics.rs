//! Rank metrics over single-answer queries.
//!
//! Every query has exactly one correct name, so relevance is binary and a
//! missing rank (answer not in the top k) scores 0 everywhere.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("metric over an empty set of queries")]
    EmptyInput,
}

/// Anything carrying the 1-based rank of the correct answer, if found.
pub trait Ranked {
    fn rank(&self) -> Option<usize>;
}

impl Ranked for Option<usize> {
    fn rank(&self) -> Option<usize> {
        *self
    }
}

impl<T: Ranked> Ranked for &T {
    fn rank(&self) -> Option<usize> {
        (*self).rank()
    }
}

fn mean<R: Ranked>(outcomes: &[R], score: impl Fn(usize) -> f64) -> Result<f64, MetricError> {
    if outcomes.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let total: f64 = outcomes.iter().filter_map(Ranked::rank).map(score).sum();
    Ok(total / outcomes.len() as f64)
}

/// Mean of `1 / rank`, 0 for misses.
pub fn mrr<R: Ranked>(outcomes: &[R]) -> Result<f64, MetricError> {
    mean(outcomes, |rank| 1.0 / rank as f64)
}

/// NDCG@k with one relevant item: `1 / log2(rank + 1)` when `rank <= k`.
pub fn ndcg_at_k<R: Ranked>(outcomes: &[R], k: usize) -> Result<f64, MetricError> {
    mean(outcomes, |rank| {
        if rank <= k {
            1.0 / ((rank + 1) as f64).log2()
        } else {
            0.0
        }
    })
}

pub fn accuracy_at_k<R: Ranked>(outcomes: &[R], k: usize) -> Result<f64, MetricError> {
    mean(outcomes, |rank| if rank <= k { 1.0 } else { 0.0 })
}

/// `counts[i]` is the number of outcomes found at rank `i + 1`, for ranks
/// up to `k`.
pub fn rank_histogram<R: Ranked>(outcomes: &[R], k: usize) -> Vec<u64> {
    let mut counts = vec![0; k];
    for rank in outcomes.iter().filter_map(Ranked::rank) {
        if (1..=k).contains(&rank) {
            counts[rank - 1] += 1;
        }
    }
    counts
}
