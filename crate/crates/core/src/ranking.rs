//! Journal rankings and their comparison.
//!
//! Ties in score are broken by size (larger first) and then by journal id
//! (ascending), so a ranking is reproducible bit for bit.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::corpus::JournalAggregate;
use crate::phi::{classify_tier, TierLabel, TierScheme};
use crate::stats::{kendall_tau, StatsError};

#[derive(Debug, Error, PartialEq)]
pub enum RankingError {
    #[error("nothing to rank")]
    Empty,
    #[error("score of journal `{0}` is not finite")]
    NonFiniteScore(String),
    #[error("duplicate journal `{0}` in ranking input")]
    DuplicateJournal(String),
    #[error("rankings cover different journal sets (e.g. `{0}`)")]
    JournalSetMismatch(String),
    #[error("scaling factor must be positive and finite, got {0}")]
    NonPositiveScale(f64),
    #[error("rank correlation: {0}")]
    Tau(String),
}

impl From<StatsError> for RankingError {
    fn from(e: StatsError) -> Self {
        RankingError::Tau(e.to_string())
    }
}

/// Input row for [`rank`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredJournal {
    pub journal_id: String,
    pub score: f64,
    pub n: u64,
    pub f: f64,
}

impl ScoredJournal {
    pub fn new(journal_id: impl Into<String>, score: f64, n: u64, f: f64) -> Self {
        ScoredJournal {
            journal_id: journal_id.into(),
            score,
            n,
            f,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingEntry {
    /// 1 is best.
    pub rank: usize,
    pub journal_id: String,
    pub score: f64,
    pub n: u64,
    pub f: f64,
}

fn rank_order(a: &ScoredJournal, b: &ScoredJournal) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(b.n.cmp(&a.n))
        .then_with(|| a.journal_id.cmp(&b.journal_id))
}

/// Sorts by score (descending) with the size/id tie-break and numbers 1..=K.
pub fn rank(scores: Vec<ScoredJournal>) -> Result<Vec<RankingEntry>, RankingError> {
    if scores.is_empty() {
        return Err(RankingError::Empty);
    }
    if let Some(bad) = scores.iter().find(|s| !s.score.is_finite()) {
        return Err(RankingError::NonFiniteScore(bad.journal_id.clone()));
    }
    let mut scores = scores;
    // -0.0 and 0.0 must tie.
    for s in &mut scores {
        s.score += 0.0;
    }
    scores.sort_by(rank_order);
    let mut seen = std::collections::HashSet::new();
    for s in &scores {
        if !seen.insert(s.journal_id.as_str()) {
            return Err(RankingError::DuplicateJournal(s.journal_id.clone()));
        }
    }
    Ok(scores
        .into_iter()
        .enumerate()
        .map(|(i, s)| RankingEntry {
            rank: i + 1,
            journal_id: s.journal_id,
            score: s.score,
            n: s.n,
            f: s.f,
        })
        .collect())
}

/// A journal whose rank differs between two rankings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub journal_id: String,
    pub rank_a: usize,
    pub rank_b: usize,
}

impl Transition {
    /// Positive when the journal moves up (towards rank 1) in ranking b.
    pub fn improvement(&self) -> i64 {
        self.rank_a as i64 - self.rank_b as i64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingComparison {
    /// Kendall tau-b on the paired scores.
    pub tau: f64,
    pub top_k: usize,
    /// Journals in the top-k of ranking b that are not in the top-k of a.
    pub new_entries_top_k: usize,
    /// Sorted by improvement, largest first, then by journal id.
    pub transitions: Vec<Transition>,
    pub inflection_rank: Option<usize>,
}

/// Compares two rankings of the same journal set. `top_k` is clamped to the
/// number of journals.
pub fn compare(a: &[RankingEntry], b: &[RankingEntry], top_k: usize) -> Result<RankingComparison, RankingError> {
    if a.is_empty() || b.is_empty() {
        return Err(RankingError::Empty);
    }
    let in_b: HashMap<&str, &RankingEntry> = b.iter().map(|e| (e.journal_id.as_str(), e)).collect();
    if a.len() != b.len() || in_b.len() != b.len() {
        let stray = a
            .iter()
            .find(|e| !in_b.contains_key(e.journal_id.as_str()))
            .map(|e| e.journal_id.clone())
            .unwrap_or_else(|| "<count differs>".into());
        return Err(RankingError::JournalSetMismatch(stray));
    }
    let mut score_a = Vec::with_capacity(a.len());
    let mut score_b = Vec::with_capacity(a.len());
    let mut transitions = Vec::new();
    for ea in a {
        let eb = in_b
            .get(ea.journal_id.as_str())
            .ok_or_else(|| RankingError::JournalSetMismatch(ea.journal_id.clone()))?;
        score_a.push(ea.score);
        score_b.push(eb.score);
        if ea.rank != eb.rank {
            transitions.push(Transition {
                journal_id: ea.journal_id.clone(),
                rank_a: ea.rank,
                rank_b: eb.rank,
            });
        }
    }
    transitions.sort_by(|x, y| {
        y.improvement()
            .cmp(&x.improvement())
            .then_with(|| x.journal_id.cmp(&y.journal_id))
    });

    let top_k = top_k.min(a.len());
    let top_a: std::collections::HashSet<&str> = a
        .iter()
        .filter(|e| e.rank <= top_k)
        .map(|e| e.journal_id.as_str())
        .collect();
    let new_entries_top_k = b
        .iter()
        .filter(|e| e.rank <= top_k && !top_a.contains(e.journal_id.as_str()))
        .count();

    Ok(RankingComparison {
        tau: kendall_tau(&score_a, &score_b)?,
        top_k,
        new_entries_top_k,
        transitions,
        inflection_rank: None,
    })
}

/// Restricts two rankings to the journals they share and re-ranks both, for
/// comparisons across corpora (e.g. different years).
pub fn intersect_rankings(
    a: &[RankingEntry],
    b: &[RankingEntry],
) -> Result<(Vec<RankingEntry>, Vec<RankingEntry>), RankingError> {
    let ids_b: std::collections::HashSet<&str> = b.iter().map(|e| e.journal_id.as_str()).collect();
    let ids_a: std::collections::HashSet<&str> = a.iter().map(|e| e.journal_id.as_str()).collect();
    let keep = |es: &[RankingEntry], other: &std::collections::HashSet<&str>| {
        es.iter()
            .filter(|e| other.contains(e.journal_id.as_str()))
            .map(|e| ScoredJournal::new(e.journal_id.clone(), e.score, e.n, e.f))
            .collect::<Vec<_>>()
    };
    Ok((rank(keep(a, &ids_b))?, rank(keep(b, &ids_a))?))
}

/// Last rank of the leading run of positive Φ values, given Φ in f-rank
/// order. `None` when the first value is already ≤ 0 or no value is.
/// Φ = 0 counts as below average.
pub fn inflection_point(phi_in_f_order: &[f64]) -> Option<usize> {
    let leading = phi_in_f_order.iter().take_while(|&&p| p > 0.0).count();
    (leading > 0 && leading < phi_in_f_order.len()).then_some(leading)
}

/// [`inflection_point`] with Φ looked up by journal id along an f ranking.
pub fn inflection_point_by_id(ranking_by_f: &[RankingEntry], phi: &HashMap<String, f64>) -> Option<usize> {
    let ordered: Vec<f64> = ranking_by_f
        .iter()
        .map(|e| phi.get(&e.journal_id).copied().unwrap_or(f64::NAN))
        .collect();
    inflection_point(&ordered)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TierCount {
    pub tier: TierLabel,
    pub count: usize,
    pub fraction: f64,
}

/// Journals per tier, best tier first. Every tier of the scheme is listed.
pub fn tier_census(phis: &[f64], scheme: TierScheme) -> Result<Vec<TierCount>, RankingError> {
    if phis.is_empty() {
        return Err(RankingError::Empty);
    }
    let mut counts: HashMap<TierLabel, usize> = HashMap::new();
    for &p in phis {
        *counts.entry(classify_tier(p, scheme)).or_default() += 1;
    }
    let total = phis.len() as f64;
    Ok(scheme
        .labels()
        .iter()
        .map(|&tier| {
            let count = counts.get(&tier).copied().unwrap_or(0);
            TierCount {
                tier,
                count,
                fraction: count as f64 / total,
            }
        })
        .collect())
}

/// Paper-weighted mean citation rate of a set of entities: total citations
/// over total papers.
pub fn pooled_mean(aggregates: &[JournalAggregate]) -> Result<f64, RankingError> {
    let papers: u64 = aggregates.iter().map(|a| a.n).sum();
    if aggregates.is_empty() || papers == 0 {
        return Err(RankingError::Empty);
    }
    Ok(aggregates.iter().map(|a| a.total_citations()).sum::<f64>() / papers as f64)
}

/// Within-field Φ when only `(n, f)` per entity is known. The field mean is
/// pooled over the listed entities; `sigma_scale` only rescales the values
/// and never changes their order.
pub fn field_relative_phi(aggregates: &[JournalAggregate], sigma_scale: f64) -> Result<Vec<f64>, RankingError> {
    let mu = pooled_mean(aggregates)?;
    field_relative_phi_with_mean(aggregates, mu, sigma_scale)
}

/// [`field_relative_phi`] with the field mean supplied by the caller, for
/// when the field holds more papers than the listed entities.
pub fn field_relative_phi_with_mean(
    aggregates: &[JournalAggregate],
    mu: f64,
    sigma_scale: f64,
) -> Result<Vec<f64>, RankingError> {
    if aggregates.is_empty() {
        return Err(RankingError::Empty);
    }
    if !(sigma_scale > 0.0 && sigma_scale.is_finite()) {
        return Err(RankingError::NonPositiveScale(sigma_scale));
    }
    Ok(aggregates
        .iter()
        .map(|a| (a.f - mu) * (a.n as f64).sqrt() / sigma_scale)
        .collect())
}
