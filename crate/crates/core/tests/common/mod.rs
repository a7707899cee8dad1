#![allow(dead_code)]

use std::collections::BTreeSet;

use phi_core::corpus::{Corpus, DocType, Paper};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

/// A printed table row: name, size, citation average, printed Φ and ranks.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub name: String,
    pub n: u64,
    pub f: f64,
    pub phi: f64,
    pub rank_f: usize,
    pub rank_phi: usize,
}

fn read_table(src: &str) -> Vec<TableRow> {
    let mut rdr = csv::Reader::from_reader(src.as_bytes());
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            TableRow {
                name: r[0].to_string(),
                n: r[1].parse().unwrap(),
                f: r[2].parse().unwrap(),
                phi: r[3].parse().unwrap(),
                rank_f: r[4].parse().unwrap(),
                rank_phi: r[5].parse().unwrap(),
            }
        })
        .collect()
}

/// Top 50 journals by overall Φ (2020 JCR; mu = 4.11, sigma = 12.5).
pub fn top50_overall() -> Vec<TableRow> {
    read_table(include_str!("../data/top50_overall.csv"))
}

/// Top 20 publishers in Physical Sciences (mu = 13.3, sigma scale = 10).
pub fn publishers() -> Vec<TableRow> {
    read_table(include_str!("../data/publishers_physical_sciences.csv"))
}

pub const JCR_MU: f64 = 4.11;
pub const JCR_SIGMA: f64 = 12.5;

/// Integer citation counts from a discretized lognormal.
pub fn lognormal_counts(len: usize, mu: f64, sigma: f64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = LogNormal::new(mu, sigma).unwrap();
    (0..len).map(|_| dist.sample(&mut rng).floor() as u64).collect()
}

/// Random corpus: `journals` journals with uneven sizes, heavy-tailed
/// citations, a mix of document types and 0-2 fields per paper.
pub fn synthetic_corpus(seed: u64, journals: usize, max_size: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = ["OPTICS", "APPLIED_PHYSICS", "ECOLOGY", "MATHEMATICS"];
    let mut papers = Vec::new();
    for j in 0..journals {
        let size = rng.random_range(1..=max_size);
        let quality: f64 = rng.random_range(0.2..2.5);
        let home = fields[rng.random_range(0..fields.len())];
        let dist = LogNormal::new(quality, 1.0).unwrap();
        for k in 0..size {
            let doc_type = match rng.random_range(0..10) {
                0 => DocType::Review,
                1 => DocType::Other,
                _ => DocType::Article,
            };
            let mut field_ids = BTreeSet::new();
            match rng.random_range(0..4) {
                0 => {}
                1 => {
                    field_ids.insert(home.to_string());
                    field_ids.insert(fields[rng.random_range(0..fields.len())].to_string());
                }
                _ => {
                    field_ids.insert(home.to_string());
                }
            }
            papers.push(Paper {
                paper_id: format!("J{j:03}-P{k:04}"),
                journal_id: format!("J{j:03}"),
                citations: dist.sample(&mut rng).floor() as u64,
                doc_type,
                field_ids,
            });
        }
    }
    Corpus::from_papers(papers).unwrap()
}

/// Corpus whose journals reproduce `(n, f)` pairs as closely as integer
/// citation counts allow: each journal's total is `round(n·f)`, spread evenly.
pub fn corpus_from_aggregates(rows: &[(String, u64, f64)]) -> Corpus {
    let mut papers = Vec::new();
    for (j, (name, n, f)) in rows.iter().enumerate() {
        let total = (*n as f64 * f).round() as u64;
        let (base, extra) = (total / n, total % n);
        for k in 0..*n {
            papers.push(Paper {
                paper_id: format!("{j}-{k}"),
                journal_id: name.clone(),
                citations: base + u64::from(k < extra),
                doc_type: DocType::Article,
                field_ids: BTreeSet::new(),
            });
        }
    }
    Corpus::from_papers(papers).unwrap()
}

/// O(n²) Kendall tau-b: counts concordant, discordant and tied pairs directly.
pub fn brute_force_tau(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as i64;
    let n0 = n * (n - 1) / 2;
    let (mut conc, mut disc, mut ties_a, mut ties_b) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let da = a[i] - a[j];
            let db = b[i] - b[j];
            if da == 0.0 {
                ties_a += 1;
            }
            if db == 0.0 {
                ties_b += 1;
            }
            if da != 0.0 && db != 0.0 {
                if (da > 0.0) == (db > 0.0) {
                    conc += 1;
                } else {
                    disc += 1;
                }
            }
        }
    }
    if ties_a == n0 || ties_b == n0 {
        return None;
    }
    Some((conc - disc) as f64 / ((n0 - ties_a) as f64 * (n0 - ties_b) as f64).sqrt())
}

/// Reference moments: mean by pairwise summation, then central moments in a
/// separate pass, accumulated in sorted order.
pub fn two_pass_moments(values: &[f64]) -> (f64, f64, f64) {
    fn pairwise(v: &[f64]) -> f64 {
        if v.len() <= 8 {
            v.iter().sum()
        } else {
            let (l, r) = v.split_at(v.len() / 2);
            pairwise(l) + pairwise(r)
        }
    }
    let n = values.len() as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = pairwise(&sorted) / n;
    let d2: Vec<f64> = sorted.iter().map(|x| (x - mean).powi(2)).collect();
    let d3: Vec<f64> = sorted.iter().map(|x| (x - mean).powi(3)).collect();
    let m2 = pairwise(&d2) / n;
    let m3 = pairwise(&d3) / n;
    (mean, m2.sqrt(), m3 / m2.powf(1.5))
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Prints one acceptance line and returns whether it passed.
pub fn report(id: &str, what: &str, pass: bool, detail: impl AsRef<str>) -> bool {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {id} {what}: {}", detail.as_ref());
    pass
}
