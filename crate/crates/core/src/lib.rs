//! Size- and field-standardized citation indicators.
//!
//! The Φ index of a journal with `n` papers and citation average `f`, in a
//! field whose papers have citation mean `mu` and standard deviation `sigma`,
//! is `(f - mu) * sqrt(n) / sigma`. It measures how far the journal sits from
//! the citation average expected of a randomly assembled journal of the same
//! size, in units of that average's standard error.
//!
//! Modules:
//!
//! - [`corpus`]: paper-level corpora, document-type filters, journal aggregates.
//! - [`stats`]: population moments and Kendall's tau-b.
//! - [`phi`]: the index, composite scores, confidence intervals and tiers.
//! - [`sampling`]: the random sample test and CLT envelopes.
//! - [`ranking`]: rankings, ranking comparison, inflection point, tier census.
//! - [`cli`]: the `phi` command-line tool.

pub mod cli;
pub mod corpus;
pub mod phi;
pub mod ranking;
pub mod sampling;
pub mod stats;

pub use corpus::{load_corpus, Corpus, CorpusFormat, DocType, DocTypeSet, FieldSelector, JournalAggregate, Paper};
pub use phi::{classify_tier, composite_phi, confidence_interval, phi_index, PhiScore, TierLabel, TierScheme};
pub use stats::{describe, field_stats, kendall_tau, FieldStats, Moments};
