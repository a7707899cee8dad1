//! Paper-level citation corpora: data model, ingestion and filtering.
//!
//! A corpus is a flat list of citable papers. Each paper carries its own
//! field memberships, so both whole-journal field allocation (a journal
//! sidecar expanded at load time) and per-paper allocation are representable.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of the pseudo-field that contains every paper.
pub const ALL_FIELDS: &str = "ALL";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("line {line}: duplicate paper_id `{paper_id}`")]
    DuplicatePaper { line: u64, paper_id: String },
    #[error("paper `{paper_id}` references unknown journal `{journal_id}`")]
    UnknownJournal { paper_id: String, journal_id: String },
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("journal `{0}` has no papers under the requested document types")]
    EmptyJournal(String),
    #[error("unrecognized corpus format `{0}` (expected csv or jsonl)")]
    UnknownFormat(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DocType {
    Article,
    Review,
    Other,
}

impl DocType {
    /// Case-insensitive label match. Anything that is not "article" or
    /// "review" maps to `Other`; the flag reports whether the label was
    /// recognized so callers can count suspicious labels.
    pub fn from_label(label: &str) -> (DocType, bool) {
        let label = label.trim();
        if label.eq_ignore_ascii_case("article") {
            (DocType::Article, true)
        } else if label.eq_ignore_ascii_case("review") {
            (DocType::Review, true)
        } else {
            (DocType::Other, label.eq_ignore_ascii_case("other"))
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DocType::Article => "article",
            DocType::Review => "review",
            DocType::Other => "other",
        }
    }

    fn bit(self) -> u8 {
        match self {
            DocType::Article => 0b001,
            DocType::Review => 0b010,
            DocType::Other => 0b100,
        }
    }
}

/// A non-empty set of document types used as a paper filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DocTypeSet(u8);

impl DocTypeSet {
    pub const ARTICLES: DocTypeSet = DocTypeSet(0b001);
    pub const REVIEWS: DocTypeSet = DocTypeSet(0b010);
    /// Articles and reviews: the citable items.
    pub const CITABLE: DocTypeSet = DocTypeSet(0b011);
    pub const EVERYTHING: DocTypeSet = DocTypeSet(0b111);

    /// Returns `None` for an empty set.
    pub fn new(types: impl IntoIterator<Item = DocType>) -> Option<DocTypeSet> {
        let bits = types.into_iter().fold(0u8, |acc, t| acc | t.bit());
        (bits != 0).then_some(DocTypeSet(bits))
    }

    pub fn contains(self, doc_type: DocType) -> bool {
        self.0 & doc_type.bit() != 0
    }

    pub fn union(self, other: DocTypeSet) -> DocTypeSet {
        DocTypeSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: DocTypeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = DocType> {
        [DocType::Article, DocType::Review, DocType::Other]
            .into_iter()
            .filter(move |t| self.contains(*t))
    }
}

impl Default for DocTypeSet {
    fn default() -> Self {
        DocTypeSet::CITABLE
    }
}

/// Short codes used on the command line: `A`, `R`, `AR`, with `O` for
/// other items (e.g. `ARO` keeps everything).
impl fmt::Display for DocTypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.iter() {
            let c = match t {
                DocType::Article => 'A',
                DocType::Review => 'R',
                DocType::Other => 'O',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for DocTypeSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut types = Vec::new();
        for c in s.trim().chars() {
            match c.to_ascii_uppercase() {
                'A' => types.push(DocType::Article),
                'R' => types.push(DocType::Review),
                'O' => types.push(DocType::Other),
                _ => return Err(format!("invalid document-type filter `{s}` (use A, R or AR)")),
            }
        }
        DocTypeSet::new(types).ok_or_else(|| "empty document-type filter".to_string())
    }
}

/// Either a named field or the pseudo-field holding every paper.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSelector {
    All,
    Field(String),
}

impl FieldSelector {
    pub fn id(&self) -> &str {
        match self {
            FieldSelector::All => ALL_FIELDS,
            FieldSelector::Field(id) => id,
        }
    }
}

impl fmt::Display for FieldSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FieldSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Ok(if s.eq_ignore_ascii_case(ALL_FIELDS) {
            FieldSelector::All
        } else {
            FieldSelector::Field(s.to_string())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paper {
    pub paper_id: String,
    pub journal_id: String,
    pub citations: u64,
    pub doc_type: DocType,
    pub field_ids: BTreeSet<String>,
}

impl Paper {
    pub fn in_field(&self, field: &FieldSelector) -> bool {
        match field {
            FieldSelector::All => true,
            FieldSelector::Field(id) => self.field_ids.contains(id),
        }
    }
}

/// A journal's size and citation average under some document-type filter.
#[derive(Debug, Clone, PartialEq)]
pub struct JournalAggregate {
    pub journal_id: String,
    /// Publication count (biennial size for a two-year window).
    pub n: u64,
    /// Citation average.
    pub f: f64,
}

impl JournalAggregate {
    /// Builds an aggregate from exact integer totals.
    pub fn from_totals(journal_id: impl Into<String>, n: u64, citations: u64) -> Self {
        debug_assert!(n > 0);
        JournalAggregate {
            journal_id: journal_id.into(),
            n,
            f: citations as f64 / n as f64,
        }
    }

    /// Builds an aggregate from an externally reported size and average,
    /// e.g. a database export that only lists `n` and `f`.
    pub fn from_average(journal_id: impl Into<String>, n: u64, f: f64) -> Self {
        JournalAggregate {
            journal_id: journal_id.into(),
            n,
            f,
        }
    }

    pub fn total_citations(&self) -> f64 {
        self.f * self.n as f64
    }
}

/// Counters for recoverable oddities seen while loading.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub unknown_doc_type_labels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl CorpusFormat {
    /// Guesses the format from a file name; `.jsonl`/`.ndjson`/`.json` are
    /// JSONL, everything else CSV.
    pub fn from_path(path: &std::path::Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext)
                if ext.eq_ignore_ascii_case("jsonl")
                    || ext.eq_ignore_ascii_case("ndjson")
                    || ext.eq_ignore_ascii_case("json") =>
            {
                CorpusFormat::Jsonl
            }
            _ => CorpusFormat::Csv,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" | "ndjson" => Ok(CorpusFormat::Jsonl),
            _ => Err(CorpusError::UnknownFormat(s.to_string())),
        }
    }
}

/// An immutable, validated collection of papers.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    papers: Vec<Paper>,
    fields: BTreeMap<String, String>,
    journals: BTreeMap<String, String>,
    report: LoadReport,
}

impl Corpus {
    /// Validates and wraps explicit paper, field and journal tables.
    pub fn new(
        papers: Vec<Paper>,
        fields: BTreeMap<String, String>,
        journals: BTreeMap<String, String>,
    ) -> Result<Corpus, CorpusError> {
        let mut seen = HashSet::with_capacity(papers.len());
        for (i, p) in papers.iter().enumerate() {
            if !seen.insert(p.paper_id.as_str()) {
                return Err(CorpusError::DuplicatePaper {
                    line: i as u64 + 1,
                    paper_id: p.paper_id.clone(),
                });
            }
            if !journals.contains_key(&p.journal_id) {
                return Err(CorpusError::UnknownJournal {
                    paper_id: p.paper_id.clone(),
                    journal_id: p.journal_id.clone(),
                });
            }
            if let Some(missing) = p.field_ids.iter().find(|f| !fields.contains_key(*f)) {
                return Err(CorpusError::UnknownField(missing.clone()));
            }
        }
        Ok(Corpus {
            papers,
            fields,
            journals,
            report: LoadReport::default(),
        })
    }

    /// Builds a corpus whose journal and field tables are derived from the
    /// papers themselves (display name = identifier).
    pub fn from_papers(papers: Vec<Paper>) -> Result<Corpus, CorpusError> {
        let journals = papers
            .iter()
            .map(|p| (p.journal_id.clone(), p.journal_id.clone()))
            .collect();
        let fields = papers
            .iter()
            .flat_map(|p| p.field_ids.iter())
            .map(|f| (f.clone(), f.clone()))
            .collect();
        Corpus::new(papers, fields, journals)
    }

    pub fn papers(&self) -> &[Paper] {
        &self.papers
    }

    pub fn fields(&self) -> &BTreeMap<String, String> {
        &self.fields
    }

    pub fn journals(&self) -> &BTreeMap<String, String> {
        &self.journals
    }

    pub fn load_report(&self) -> &LoadReport {
        &self.report
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    /// Keeps exactly the papers whose document type is in `allowed`.
    /// Journal and field tables are left untouched.
    pub fn filter_doc_types(&self, allowed: DocTypeSet) -> Corpus {
        Corpus {
            papers: self
                .papers
                .iter()
                .filter(|p| allowed.contains(p.doc_type))
                .cloned()
                .collect(),
            fields: self.fields.clone(),
            journals: self.journals.clone(),
            report: self.report.clone(),
        }
    }

    /// Papers belonging to `field`. A paper listed in several fields shows
    /// up in each of them at full weight.
    pub fn papers_in_field(&self, field: &FieldSelector) -> Result<Vec<&Paper>, CorpusError> {
        self.check_field(field)?;
        Ok(self.papers.iter().filter(|p| p.in_field(field)).collect())
    }

    pub fn check_field(&self, field: &FieldSelector) -> Result<(), CorpusError> {
        match field {
            FieldSelector::Field(id) if !self.fields.contains_key(id) => Err(CorpusError::UnknownField(id.clone())),
            _ => Ok(()),
        }
    }

    pub fn journal_aggregate(&self, journal_id: &str, allowed: DocTypeSet) -> Result<JournalAggregate, CorpusError> {
        self.journal_aggregate_in_field(journal_id, &FieldSelector::All, allowed)
    }

    /// Like [`Corpus::journal_aggregate`] but restricted to the journal's
    /// papers that belong to `field`. With whole-journal field allocation
    /// this is identical to the unrestricted aggregate.
    pub fn journal_aggregate_in_field(
        &self,
        journal_id: &str,
        field: &FieldSelector,
        allowed: DocTypeSet,
    ) -> Result<JournalAggregate, CorpusError> {
        self.check_field(field)?;
        let (n, total) = self
            .papers
            .iter()
            .filter(|p| p.journal_id == journal_id && allowed.contains(p.doc_type) && p.in_field(field))
            .fold((0u64, 0u64), |(n, s), p| (n + 1, s + p.citations));
        if n == 0 {
            return Err(CorpusError::EmptyJournal(journal_id.to_string()));
        }
        Ok(JournalAggregate::from_totals(journal_id, n, total))
    }

    /// Aggregates for every journal with at least one paper in `field` under
    /// `allowed`, ordered by journal id.
    pub fn journal_aggregates(
        &self,
        field: &FieldSelector,
        allowed: DocTypeSet,
    ) -> Result<Vec<JournalAggregate>, CorpusError> {
        self.check_field(field)?;
        let mut totals: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
        for p in self
            .papers
            .iter()
            .filter(|p| allowed.contains(p.doc_type) && p.in_field(field))
        {
            let e = totals.entry(p.journal_id.as_str()).or_default();
            e.0 += 1;
            e.1 += p.citations;
        }
        Ok(totals
            .into_iter()
            .map(|(id, (n, s))| JournalAggregate::from_totals(id, n, s))
            .collect())
    }

    /// Fields a journal's papers belong to (union over its papers).
    pub fn journal_fields(&self, journal_id: &str) -> BTreeSet<String> {
        self.papers
            .iter()
            .filter(|p| p.journal_id == journal_id)
            .flat_map(|p| p.field_ids.iter().cloned())
            .collect()
    }

    /// Adds whole-journal field memberships from a `journal_id,field_id`
    /// table to every paper of the listed journals.
    pub fn with_journal_fields<R: Read>(mut self, sidecar: R) -> Result<Corpus, CorpusError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(sidecar);
        let mut by_journal: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != 2 {
                return Err(CorpusError::MalformedRow {
                    line,
                    message: format!("expected 2 columns (journal_id,field_id), found {}", rec.len()),
                });
            }
            let (journal, field) = (rec[0].to_string(), rec[1].to_string());
            if !self.journals.contains_key(&journal) {
                return Err(CorpusError::MalformedRow {
                    line,
                    message: format!("journal `{journal}` does not occur in the corpus"),
                });
            }
            if field.is_empty() {
                return Err(CorpusError::MalformedRow {
                    line,
                    message: "empty field_id".into(),
                });
            }
            by_journal.entry(journal).or_default().insert(field);
        }
        for fields in by_journal.values() {
            for f in fields {
                self.fields.entry(f.clone()).or_insert_with(|| f.clone());
            }
        }
        for p in &mut self.papers {
            if let Some(extra) = by_journal.get(&p.journal_id) {
                p.field_ids.extend(extra.iter().cloned());
            }
        }
        Ok(self)
    }

    /// Writes the corpus in the same layout [`load_corpus`] reads.
    pub fn write<W: Write>(&self, out: W, format: CorpusFormat) -> Result<(), CorpusError> {
        match format {
            CorpusFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(CSV_HEADER)?;
                for p in &self.papers {
                    let fields = p.field_ids.iter().cloned().collect::<Vec<_>>().join(";");
                    w.write_record([
                        p.paper_id.as_str(),
                        p.journal_id.as_str(),
                        p.doc_type.label(),
                        &p.citations.to_string(),
                        &fields,
                    ])?;
                }
                w.flush()?;
            }
            CorpusFormat::Jsonl => {
                let mut out = out;
                for p in &self.papers {
                    let row = JsonRow {
                        paper_id: p.paper_id.clone(),
                        journal_id: p.journal_id.clone(),
                        doc_type: p.doc_type.label().to_string(),
                        citations: serde_json::Value::from(p.citations),
                        field_ids: p.field_ids.iter().cloned().collect(),
                    };
                    serde_json::to_writer(&mut out, &row)?;
                    out.write_all(b"\n")?;
                }
                out.flush()?;
            }
        }
        Ok(())
    }
}

const CSV_HEADER: [&str; 5] = ["paper_id", "journal_id", "doc_type", "citations", "field_ids"];

#[derive(Debug, Serialize, Deserialize)]
struct JsonRow {
    paper_id: String,
    journal_id: String,
    doc_type: String,
    citations: serde_json::Value,
    #[serde(default)]
    field_ids: Vec<String>,
}

struct Builder {
    papers: Vec<Paper>,
    seen: HashSet<String>,
    report: LoadReport,
}

impl Builder {
    fn new() -> Self {
        Builder {
            papers: Vec::new(),
            seen: HashSet::new(),
            report: LoadReport::default(),
        }
    }

    fn push(
        &mut self,
        line: u64,
        paper_id: &str,
        journal_id: &str,
        doc_type: &str,
        citations: u64,
        field_ids: impl IntoIterator<Item = String>,
    ) -> Result<(), CorpusError> {
        let malformed = |message: &str| CorpusError::MalformedRow {
            line,
            message: message.to_string(),
        };
        if paper_id.is_empty() {
            return Err(malformed("empty paper_id"));
        }
        if journal_id.is_empty() {
            return Err(malformed("empty journal_id"));
        }
        if !self.seen.insert(paper_id.to_string()) {
            return Err(CorpusError::DuplicatePaper {
                line,
                paper_id: paper_id.to_string(),
            });
        }
        let (doc_type, recognized) = DocType::from_label(doc_type);
        if !recognized {
            self.report.unknown_doc_type_labels += 1;
        }
        self.papers.push(Paper {
            paper_id: paper_id.to_string(),
            journal_id: journal_id.to_string(),
            citations,
            doc_type,
            field_ids: field_ids
                .into_iter()
                .map(|f| f.trim().to_string())
                .filter(|f| !f.is_empty())
                .collect(),
        });
        Ok(())
    }

    fn finish(self) -> Result<Corpus, CorpusError> {
        let mut corpus = Corpus::from_papers(self.papers)?;
        corpus.report = self.report;
        Ok(corpus)
    }
}

fn parse_citations(raw: &str, line: u64) -> Result<u64, CorpusError> {
    let raw = raw.trim();
    match raw.parse::<i64>() {
        Ok(v) if v >= 0 => Ok(v as u64),
        Ok(v) => Err(CorpusError::MalformedRow {
            line,
            message: format!("negative citation count {v}"),
        }),
        Err(_) => Err(CorpusError::MalformedRow {
            line,
            message: format!("citation count `{raw}` is not a non-negative integer"),
        }),
    }
}

/// Reads a corpus from CSV (header `paper_id,journal_id,doc_type,citations,field_ids`,
/// `;`-separated field list) or JSONL (one object per line, `field_ids` an array).
pub fn load_corpus<R: Read>(source: R, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    let mut b = Builder::new();
    match format {
        CorpusFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(true)
                .flexible(true)
                .trim(csv::Trim::All)
                .from_reader(source);
            let header = rdr.headers()?.clone();
            let col = |name: &str| -> Result<usize, CorpusError> {
                header
                    .iter()
                    .position(|h| h.eq_ignore_ascii_case(name))
                    .ok_or_else(|| CorpusError::MalformedRow {
                        line: 1,
                        message: format!("missing column `{name}`"),
                    })
            };
            let idx = [
                col("paper_id")?,
                col("journal_id")?,
                col("doc_type")?,
                col("citations")?,
                col("field_ids")?,
            ];
            for rec in rdr.records() {
                let rec = rec?;
                let line = rec.position().map_or(0, |p| p.line());
                if rec.len() != header.len() {
                    return Err(CorpusError::MalformedRow {
                        line,
                        message: format!("expected {} columns, found {}", header.len(), rec.len()),
                    });
                }
                let citations = parse_citations(&rec[idx[3]], line)?;
                let fields = rec[idx[4]].split(';').map(str::to_string);
                b.push(line, &rec[idx[0]], &rec[idx[1]], &rec[idx[2]], citations, fields)?;
            }
        }
        CorpusFormat::Jsonl => {
            for (i, line) in BufReader::new(source).lines().enumerate() {
                let line_no = i as u64 + 1;
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let row: JsonRow = serde_json::from_str(&line).map_err(|e| CorpusError::MalformedRow {
                    line: line_no,
                    message: e.to_string(),
                })?;
                let citations = match &row.citations {
                    serde_json::Value::Number(n) => match n.as_i64() {
                        Some(v) => parse_citations(&v.to_string(), line_no)?,
                        None => parse_citations(&n.to_string(), line_no)?,
                    },
                    serde_json::Value::String(s) => parse_citations(s, line_no)?,
                    other => {
                        return Err(CorpusError::MalformedRow {
                            line: line_no,
                            message: format!("citations must be an integer, found {other}"),
                        })
                    }
                };
                b.push(
                    line_no,
                    &row.paper_id,
                    &row.journal_id,
                    &row.doc_type,
                    citations,
                    row.field_ids,
                )?;
            }
        }
    }
    b.finish()
}
