//! Package-aware completion of global identifiers, with a prefix-masking
//! benchmark to measure how well a ranking strategy recovers known names.
//!
//! * [`corpus`] loads a package-structured corpus and extracts reference
//!   sites.
//! * [`engine`] ranks completion candidates, either as one flat list or
//!   by package proximity.
//! * [`bench`] masks every reference to short prefixes, queries the engine,
//!   and reports MRR, NDCG, accuracy and rank distributions.

pub mod bench;
pub mod corpus;
pub mod engine;
