//! Descriptive statistics for citation populations and Kendall rank correlation.
//!
//! Moments use the population convention throughout: the standard deviation
//! divides by `N`, and skewness is the unadjusted `g1 = m3 / m2^(3/2)`.
//! Field means and deviations are treated as fixed constants of the field,
//! not as estimates from a sample.

use std::cmp::Ordering;
use std::collections::HashSet;

use thiserror::Error;

use crate::corpus::{Corpus, CorpusError, DocTypeSet, FieldSelector};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("no values to describe")]
    Empty,
    #[error("value at index {0} is not finite")]
    NonFinite(usize),
    #[error("sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("rank correlation needs at least two pairs")]
    TooShort,
    #[error("Kendall tau is undefined: every value in one sequence is tied")]
    AllTied,
    #[error("field `{0}` has no papers under the requested document types")]
    EmptyField(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Population moments of a set of values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation (divisor `N`).
    pub std: f64,
    /// `None` when the spread is zero or fewer than three values were seen.
    pub skewness: Option<f64>,
}

impl Moments {
    pub fn variance(&self) -> f64 {
        self.std * self.std
    }
}

/// Two-pass population moments. Fails on empty or non-finite input.
pub fn describe(values: &[f64]) -> Result<Moments, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite(i));
    }
    let count = values.len();
    let n = count as f64;
    let mean = values.iter().sum::<f64>() / n;

    if values.iter().all(|v| *v == values[0]) {
        return Ok(Moments {
            count,
            mean: values[0],
            std: 0.0,
            skewness: None,
        });
    }

    let (mut m2, mut m3) = (0.0, 0.0);
    for v in values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
    }
    m2 /= n;
    m3 /= n;
    let skewness = (count >= 3 && m2 > 0.0).then(|| m3 / m2.powf(1.5));
    Ok(Moments {
        count,
        mean,
        std: m2.sqrt(),
        skewness,
    })
}

/// [`describe`] over integer citation counts.
pub fn describe_counts(counts: &[u64]) -> Result<Moments, StatsError> {
    let values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    describe(&values)
}

/// Citation statistics of one field under one document-type filter.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldStats {
    pub field: FieldSelector,
    pub moments: Moments,
    pub n_papers: usize,
    pub n_journals: usize,
    pub doc_filter: DocTypeSet,
}

impl FieldStats {
    pub fn mu(&self) -> f64 {
        self.moments.mean
    }

    pub fn sigma(&self) -> f64 {
        self.moments.std
    }
}

pub fn field_stats(corpus: &Corpus, field: &FieldSelector, doc_filter: DocTypeSet) -> Result<FieldStats, StatsError> {
    let papers: Vec<_> = corpus
        .papers_in_field(field)?
        .into_iter()
        .filter(|p| doc_filter.contains(p.doc_type))
        .collect();
    if papers.is_empty() {
        return Err(StatsError::EmptyField(field.id().to_string()));
    }
    let counts: Vec<u64> = papers.iter().map(|p| p.citations).collect();
    let journals: HashSet<&str> = papers.iter().map(|p| p.journal_id.as_str()).collect();
    Ok(FieldStats {
        field: field.clone(),
        moments: describe_counts(&counts)?,
        n_papers: papers.len(),
        n_journals: journals.len(),
        doc_filter,
    })
}

/// Kendall's tau-b between two paired score sequences.
///
/// Uses Knight's O(n log n) algorithm: sort by `(a, b)`, count ties, then
/// count discordant pairs as inversions of `b` with a merge sort. On tie-free
/// data tau-b equals tau-a.
pub fn kendall_tau(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(StatsError::TooShort);
    }
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        if !x.is_finite() || !y.is_finite() {
            return Err(StatsError::NonFinite(i));
        }
    }
    // `+ 0.0` folds -0.0 into 0.0 so total_cmp agrees with ==.
    let mut pairs: Vec<(f64, f64)> = a.iter().zip(b).map(|(x, y)| (x + 0.0, y + 0.0)).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));

    let n = pairs.len() as i64;
    let n0 = n * (n - 1) / 2;
    let ties_a = tied_pairs(&pairs, |p, q| p.0 == q.0);
    let ties_joint = tied_pairs(&pairs, |p, q| p.0 == q.0 && p.1 == q.1);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut scratch = vec![0.0; ys.len()];
    let swaps = merge_count(&mut ys, &mut scratch);
    let ties_b = tied_pairs(&ys, |p, q| p == q);

    if ties_a == n0 || ties_b == n0 {
        return Err(StatsError::AllTied);
    }
    let s = n0 - ties_a - ties_b + ties_joint - 2 * swaps;
    Ok(s as f64 / ((n0 - ties_a) as f64 * (n0 - ties_b) as f64).sqrt())
}

/// Number of tied pairs in a sorted slice, grouping runs with `eq`.
fn tied_pairs<T>(sorted: &[T], eq: impl Fn(&T, &T) -> bool) -> i64 {
    let mut total = 0i64;
    let mut run = 1i64;
    for w in sorted.windows(2) {
        if eq(&w[0], &w[1]) {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sorts `v` ascending and returns the number of strict inversions.
fn merge_count(v: &mut [f64], scratch: &mut [f64]) -> i64 {
    let len = v.len();
    if len < 2 {
        return 0;
    }
    let mid = len / 2;
    let mut swaps = {
        let (lo, hi) = v.split_at_mut(mid);
        let (slo, shi) = scratch.split_at_mut(mid);
        merge_count(lo, slo) + merge_count(hi, shi)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < len {
        if v[j].total_cmp(&v[i]) == Ordering::Less {
            scratch[k] = v[j];
            swaps += (mid - i) as i64;
            j += 1;
        } else {
            scratch[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    scratch[k..k + len - j].copy_from_slice(&v[j..len]);
    v.copy_from_slice(&scratch[..len]);
    swaps
}
