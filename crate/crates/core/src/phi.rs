//! The Φ index: a journal's citation average standardized for size and field.
//!
//! For a journal of `n` papers with citation average `f` in a field whose
//! papers have population mean `mu` and standard deviation `sigma`,
//!
//! ```text
//! phi = (f - mu) * sqrt(n) / sigma
//! ```
//!
//! i.e. the z-score of `f` against the citation averages of randomly formed
//! journals of the same size. Its standard error is 1 by construction, which
//! gives fixed-width confidence intervals and tier boundaries.

use std::fmt;

use thiserror::Error;

use crate::corpus::{Corpus, CorpusError, DocTypeSet, FieldSelector};
use crate::stats::FieldStats;

#[derive(Debug, Error, PartialEq)]
pub enum PhiError {
    #[error("field standard deviation must be positive and finite, got {0}")]
    NonPositiveSigma(f64),
    #[error("journal size must be at least 1")]
    EmptyJournal,
    #[error("envelope multiplier k must be positive, got {0}")]
    NonPositiveK(f64),
    #[error("citation average or field mean is not finite")]
    NonFinite,
    #[error("document-type filter mismatch: journal aggregated under {journal}, field stats under {field}")]
    FilterMismatch { journal: String, field: String },
    #[error("composite Φ needs at least one per-field score")]
    NoScores,
    #[error("composite Φ mixes journals `{0}` and `{1}`")]
    MixedJournals(String, String),
    #[error("composite Φ mixes document-type filters")]
    MixedFilters,
    #[error("{0}")]
    Corpus(String),
}

impl From<CorpusError> for PhiError {
    fn from(e: CorpusError) -> Self {
        PhiError::Corpus(e.to_string())
    }
}

fn check_inputs(f: f64, n: u64, mu: f64, sigma: f64) -> Result<(), PhiError> {
    if n < 1 {
        return Err(PhiError::EmptyJournal);
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(PhiError::NonPositiveSigma(sigma));
    }
    if !f.is_finite() || !mu.is_finite() {
        return Err(PhiError::NonFinite);
    }
    Ok(())
}

/// `(f - mu) * sqrt(n) / sigma`.
pub fn phi_index(f: f64, n: u64, mu: f64, sigma: f64) -> Result<f64, PhiError> {
    check_inputs(f, n, mu, sigma)?;
    Ok((f - mu) * (n as f64).sqrt() / sigma)
}

/// Distance of `f` from `mu` in units of the k-sigma CLT half-width at size
/// `n`, i.e. `phi / k`. Journals with equal ratios sit on the same relative
/// position between the field mean and the envelope, and therefore share a Φ.
pub fn equivalence_ratio(f: f64, n: u64, mu: f64, sigma: f64, k: f64) -> Result<f64, PhiError> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(PhiError::NonPositiveK(k));
    }
    check_inputs(f, n, mu, sigma)?;
    Ok((f - mu) * (n as f64).sqrt() / (k * sigma))
}

/// A journal's Φ together with the inputs that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiScore {
    pub journal_id: String,
    pub field: FieldSelector,
    pub doc_filter: DocTypeSet,
    pub n: u64,
    pub f: f64,
    pub mu: f64,
    pub sigma: f64,
    pub phi: f64,
}

impl PhiScore {
    pub fn new(
        journal_id: impl Into<String>,
        field: FieldSelector,
        doc_filter: DocTypeSet,
        n: u64,
        f: f64,
        mu: f64,
        sigma: f64,
    ) -> Result<PhiScore, PhiError> {
        let phi = phi_index(f, n, mu, sigma)?;
        Ok(PhiScore {
            journal_id: journal_id.into(),
            field,
            doc_filter,
            n,
            f,
            mu,
            sigma,
            phi,
        })
    }

    pub fn confidence_interval(&self, level: ConfidenceLevel) -> ConfidenceInterval {
        confidence_interval(self.phi, level)
    }
}

/// Φ of `journal_id` within the field described by `stats`. Only the
/// journal's papers that belong to that field count toward `n` and `f`.
pub fn phi_for_journal(
    corpus: &Corpus,
    journal_id: &str,
    stats: &FieldStats,
    doc_filter: DocTypeSet,
) -> Result<PhiScore, PhiError> {
    if doc_filter != stats.doc_filter {
        return Err(PhiError::FilterMismatch {
            journal: doc_filter.to_string(),
            field: stats.doc_filter.to_string(),
        });
    }
    let agg = corpus.journal_aggregate_in_field(journal_id, &stats.field, doc_filter)?;
    PhiScore::new(
        agg.journal_id,
        stats.field.clone(),
        doc_filter,
        agg.n,
        agg.f,
        stats.mu(),
        stats.sigma(),
    )
}

/// Unweighted mean of one journal's per-field Φ values.
pub fn composite_phi(per_field: &[PhiScore]) -> Result<f64, PhiError> {
    let first = per_field.first().ok_or(PhiError::NoScores)?;
    for s in &per_field[1..] {
        if s.journal_id != first.journal_id {
            return Err(PhiError::MixedJournals(first.journal_id.clone(), s.journal_id.clone()));
        }
        if s.doc_filter != first.doc_filter {
            return Err(PhiError::MixedFilters);
        }
    }
    Ok(per_field.iter().map(|s| s.phi).sum::<f64>() / per_field.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfidenceLevel {
    P95,
    P99,
    P997,
}

impl ConfidenceLevel {
    /// Two-sided normal quantile used for the interval half-width.
    pub fn z(self) -> f64 {
        match self {
            ConfidenceLevel::P95 => 1.96,
            ConfidenceLevel::P99 => 2.576,
            ConfidenceLevel::P997 => 3.0,
        }
    }
}

/// Standard error of Φ. Φ is a z-score, so this is exactly one.
pub const PHI_STANDARD_ERROR: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub level: ConfidenceLevel,
    pub lower: f64,
    pub upper: f64,
}

pub fn confidence_interval(phi: f64, level: ConfidenceLevel) -> ConfidenceInterval {
    let half = level.z() * PHI_STANDARD_ERROR;
    ConfidenceInterval {
        level,
        lower: phi - half,
        upper: phi + half,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TierScheme {
    ThreeTier,
    SixTier,
}

impl TierScheme {
    /// Labels from best to worst.
    pub fn labels(self) -> &'static [TierLabel] {
        use TierLabel::*;
        match self {
            TierScheme::ThreeTier => &[HighImpact, AverageImpact, LowImpact],
            TierScheme::SixTier => &[Significant, Strong, HighAverage, LowAverage, Weak, Marginal],
        }
    }
}

impl std::str::FromStr for TierScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "3" => Ok(TierScheme::ThreeTier),
            "6" => Ok(TierScheme::SixTier),
            other => Err(format!("unknown tier scheme `{other}` (use 3 or 6)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TierLabel {
    HighImpact,
    AverageImpact,
    LowImpact,
    Significant,
    Strong,
    HighAverage,
    LowAverage,
    Weak,
    Marginal,
}

impl TierLabel {
    pub fn name(self) -> &'static str {
        match self {
            TierLabel::HighImpact => "high impact",
            TierLabel::AverageImpact => "average impact",
            TierLabel::LowImpact => "low impact",
            TierLabel::Significant => "significant",
            TierLabel::Strong => "strong",
            TierLabel::HighAverage => "high average",
            TierLabel::LowAverage => "low average",
            TierLabel::Weak => "weak",
            TierLabel::Marginal => "marginal",
        }
    }

    pub fn scheme(self) -> TierScheme {
        match self {
            TierLabel::HighImpact | TierLabel::AverageImpact | TierLabel::LowImpact => TierScheme::ThreeTier,
            _ => TierScheme::SixTier,
        }
    }
}

impl fmt::Display for TierLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Three-tier boundaries are the 95% interval half-width. In the six-tier
/// scheme each band is closed on its upper edge, so 3, 2, 0, -2 and -3 fall
/// into the lower of the two adjacent bands.
pub fn classify_tier(phi: f64, scheme: TierScheme) -> TierLabel {
    match scheme {
        TierScheme::ThreeTier => {
            let z = ConfidenceLevel::P95.z();
            if phi > z {
                TierLabel::HighImpact
            } else if phi < -z {
                TierLabel::LowImpact
            } else {
                TierLabel::AverageImpact
            }
        }
        TierScheme::SixTier => {
            if phi > 3.0 {
                TierLabel::Significant
            } else if phi > 2.0 {
                TierLabel::Strong
            } else if phi > 0.0 {
                TierLabel::HighAverage
            } else if phi > -2.0 {
                TierLabel::LowAverage
            } else if phi > -3.0 {
                TierLabel::Weak
            } else {
                TierLabel::Marginal
            }
        }
    }
}
