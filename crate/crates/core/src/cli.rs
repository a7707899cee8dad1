//! The `phi` command-line tool.
//!
//! Every command writes CSV. Output goes to stdout or, with `--output`, to a
//! temporary file that is renamed into place only once the command has
//! succeeded. Exit codes: 0 success, 1 data error, 2 usage error.

use std::collections::{BTreeMap, HashMap};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{load_corpus, Corpus, CorpusFormat, DocType, DocTypeSet, FieldSelector};
use crate::phi::{classify_tier, composite_phi, confidence_interval, ConfidenceLevel, PhiScore, TierScheme};
use crate::ranking::{compare, inflection_point_by_id, rank, tier_census, ScoredJournal};
use crate::sampling::{
    clt_envelope, log_size_grid, run_simulation, Replacement, SimulationConfig, DEFAULT_DRAWS_PER_SIZE,
    DEFAULT_GRID_POINTS,
};
use crate::stats::field_stats;

#[derive(Debug, Parser)]
#[command(name = "phi", version, about = "Size- and field-standardized citation indicators")]
struct Cli {
    /// Read default flag values from a `key=value` file; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Paper-level corpus (CSV or JSONL).
    corpus: PathBuf,
    /// Corpus format; guessed from the extension when omitted.
    #[arg(long, value_parser = ["csv", "jsonl"])]
    format: Option<String>,
    /// Optional `journal_id,field_id` table expanded onto every paper.
    #[arg(long, value_name = "FILE")]
    journal_fields: Option<PathBuf>,
    /// Write here instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Selection {
    /// Field id, or ALL for every paper.
    #[arg(long, default_value = "ALL")]
    field: String,
    /// Document types: A (articles), R (reviews) or AR.
    #[arg(long, default_value = "AR")]
    doc_filter: DocTypeSet,
    /// Override the field mean instead of computing it from the corpus.
    #[arg(long)]
    mu: Option<f64>,
    /// Override the field standard deviation.
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Key {
    F,
    Phi,
}

impl Key {
    fn name(self) -> &'static str {
        match self {
            Key::F => "f",
            Key::Phi => "phi",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReplacementArg {
    With,
    Without,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a corpus and report counts.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Mean, standard deviation and skewness of citations per field.
    FieldStats {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "AR")]
        doc_filter: DocTypeSet,
        #[arg(long, default_value_t = 2)]
        decimals: usize,
    },
    /// Φ index of every journal in a field.
    Phi {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sel: Selection,
        /// Average each journal's Φ over all fields it belongs to.
        #[arg(long)]
        composite: bool,
        #[arg(long, default_value_t = 1)]
        decimals: usize,
    },
    /// Rank journals by citation average or Φ.
    Rank {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sel: Selection,
        #[arg(long, value_enum, default_value = "phi")]
        by: Key,
        #[arg(long, default_value_t = 1)]
        decimals: usize,
    },
    /// Compare two rankings: Kendall tau, new top-k entries, inflection rank.
    Compare {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sel: Selection,
        #[arg(long, value_enum, default_value = "f")]
        by: Key,
        #[arg(long, value_enum, default_value = "phi")]
        vs: Key,
        #[arg(long, default_value_t = 50)]
        top_k: usize,
        /// Also write per-journal rank changes here.
        #[arg(long, value_name = "FILE")]
        transitions: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        decimals: usize,
    },
    /// Random sample test: random journals drawn from a field's papers.
    Simulate {
        /// Corpus, or a population CSV with a single `citations` column.
        input: PathBuf,
        #[arg(long, value_parser = ["csv", "jsonl"])]
        format: Option<String>,
        #[arg(long, value_name = "FILE")]
        journal_fields: Option<PathBuf>,
        #[arg(long, default_value = "ALL")]
        field: String,
        #[arg(long, default_value = "AR")]
        doc_filter: DocTypeSet,
        /// Comma list (`10,100,1000`) or `log:MIN:MAX:COUNT`.
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DRAWS_PER_SIZE)]
        draws: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "without")]
        replacement: ReplacementArg,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        envelope_k: Vec<f64>,
        /// Envelope sidecar path; defaults to `<output>.envelope.csv`.
        #[arg(long, value_name = "FILE")]
        envelope_out: Option<PathBuf>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        decimals: usize,
    },
    /// Count journals per tier.
    Tiers {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sel: Selection,
        #[arg(long, default_value = "3")]
        scheme: TierScheme,
        #[arg(long, default_value_t = 3)]
        decimals: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Data(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn data<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Data(msg.into()))
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match apply_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(CliError::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

/// Splices `key=value` lines from `--config FILE` into argv as `--key value`
/// unless the flag is already present.
fn apply_config(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let pos = argv.iter().position(|a| a == "--config");
    let path = match pos {
        Some(i) => argv.get(i + 1).map(PathBuf::from).ok_or("--config needs a file")?,
        None => match argv.iter().find_map(|a| a.to_str()?.strip_prefix("--config=")) {
            Some(p) => PathBuf::from(p),
            None => return Ok(argv),
        },
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut out = argv.clone();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), no + 1))?;
        let flag = format!("--{}", key.trim().replace('_', "-"));
        let present = argv.iter().any(|a| {
            a.to_str()
                .is_some_and(|s| s == flag || s.starts_with(&format!("{flag}=")))
        });
        if !present {
            out.push(OsString::from(format!("{flag}={}", value.trim())));
        }
    }
    Ok(out)
}

fn num(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_string(),
        _ => s,
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes `contents` to `path` atomically, or to `stdout` when `path` is None.
fn emit(path: Option<&Path>, contents: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        None => {
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(contents.as_bytes())?;
            tmp.flush()?;
            tmp.persist(path).map_err(|e| CliError::Data(e.to_string()))?;
        }
    }
    Ok(())
}

fn open_corpus(path: &Path, format: Option<&str>, sidecar: Option<&Path>) -> CliResult<Corpus> {
    let format = match format {
        Some(f) => f.parse()?,
        None => CorpusFormat::from_path(path),
    };
    let file = File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut corpus =
        load_corpus(BufReader::new(file), format).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if let Some(sc) = sidecar {
        let f = File::open(sc).map_err(|e| CliError::Data(format!("{}: {e}", sc.display())))?;
        corpus = corpus
            .with_journal_fields(BufReader::new(f))
            .map_err(|e| CliError::Data(format!("{}: {e}", sc.display())))?;
    }
    Ok(corpus)
}

fn load(input: &Input) -> CliResult<Corpus> {
    open_corpus(&input.corpus, input.format.as_deref(), input.journal_fields.as_deref())
}

/// Per-journal Φ for every journal with papers in the selected field.
fn journal_scores(corpus: &Corpus, sel: &Selection) -> CliResult<Vec<PhiScore>> {
    let field: FieldSelector = sel.field.parse().expect("infallible");
    corpus.check_field(&field)?;
    let (mu, sigma) = match (sel.mu, sel.sigma) {
        (Some(mu), Some(sigma)) => (mu, sigma),
        (mu, sigma) => {
            let fs = field_stats(corpus, &field, sel.doc_filter)?;
            (mu.unwrap_or(fs.mu()), sigma.unwrap_or(fs.sigma()))
        }
    };
    let aggregates = corpus.journal_aggregates(&field, sel.doc_filter)?;
    if aggregates.is_empty() {
        return data(format!("no journals in field {field} under filter {}", sel.doc_filter));
    }
    aggregates
        .into_iter()
        .map(|a| {
            PhiScore::new(a.journal_id, field.clone(), sel.doc_filter, a.n, a.f, mu, sigma).map_err(CliError::from)
        })
        .collect()
}

fn ranking_by(scores: &[PhiScore], key: Key) -> CliResult<Vec<crate::ranking::RankingEntry>> {
    Ok(rank(
        scores
            .iter()
            .map(|s| {
                let score = match key {
                    Key::F => s.f,
                    Key::Phi => s.phi,
                };
                ScoredJournal::new(s.journal_id.clone(), score, s.n, s.f)
            })
            .collect(),
    )?)
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Validate { input } => {
            let c = load(&input)?;
            let count = |t| c.papers().iter().filter(|p| p.doc_type == t).count();
            let mut out = String::from("metric,value\n");
            for (k, v) in [
                ("papers", c.len()),
                ("journals", c.journals().len()),
                ("fields", c.fields().len()),
                ("articles", count(DocType::Article)),
                ("reviews", count(DocType::Review)),
                ("other", count(DocType::Other)),
                ("unknown_doc_type_labels", c.load_report().unknown_doc_type_labels),
            ] {
                writeln!(out, "{k},{v}").unwrap();
            }
            if c.load_report().unknown_doc_type_labels > 0 {
                writeln!(
                    stderr,
                    "warning: {} papers had unrecognized document types and were mapped to other",
                    c.load_report().unknown_doc_type_labels
                )?;
            }
            emit(input.output.as_deref(), &out, stdout)
        }

        Command::FieldStats {
            input,
            doc_filter,
            decimals,
        } => {
            let c = load(&input)?;
            let mut out = String::from("field_id,mu,sigma,skewness,n_papers,n_journals\n");
            let selectors =
                std::iter::once(FieldSelector::All).chain(c.fields().keys().map(|f| FieldSelector::Field(f.clone())));
            for sel in selectors {
                let fs = match field_stats(&c, &sel, doc_filter) {
                    Ok(fs) => fs,
                    Err(crate::stats::StatsError::EmptyField(id)) => {
                        writeln!(stderr, "note: field {id} has no papers under {doc_filter}; skipped")?;
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                let skew = fs
                    .moments
                    .skewness
                    .map_or_else(|| "NA".to_string(), |g| num(g, decimals));
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    csv_field(sel.id()),
                    num(fs.mu(), decimals),
                    num(fs.sigma(), decimals),
                    skew,
                    fs.n_papers,
                    fs.n_journals
                )
                .unwrap();
            }
            emit(input.output.as_deref(), &out, stdout)
        }

        Command::Phi {
            input,
            sel,
            composite,
            decimals,
        } => {
            let c = load(&input)?;
            let d = decimals;
            let stat_d = decimals.max(2);
            let mut out = String::new();
            if composite {
                out.push_str("journal_id,fields,n_fields,phi,ci95_lo,ci95_hi,tier3,tier6\n");
                let mut per_journal: BTreeMap<String, Vec<PhiScore>> = BTreeMap::new();
                for field in c.fields().keys() {
                    let field_sel = Selection {
                        field: field.clone(),
                        doc_filter: sel.doc_filter,
                        mu: sel.mu,
                        sigma: sel.sigma,
                    };
                    let scores = match journal_scores(&c, &field_sel) {
                        Ok(s) => s,
                        Err(CliError::Data(msg)) => {
                            writeln!(stderr, "note: field {field} skipped: {msg}")?;
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    for s in scores {
                        per_journal.entry(s.journal_id.clone()).or_default().push(s);
                    }
                }
                if per_journal.is_empty() {
                    return data("no journal has papers in any named field");
                }
                for (journal, scores) in &per_journal {
                    let phi = composite_phi(scores)?;
                    let ci = confidence_interval(phi, ConfidenceLevel::P95);
                    let fields: Vec<&str> = scores.iter().map(|s| s.field.id()).collect();
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        csv_field(journal),
                        csv_field(&fields.join(";")),
                        scores.len(),
                        num(phi, d),
                        num(ci.lower, d),
                        num(ci.upper, d),
                        classify_tier(phi, TierScheme::ThreeTier),
                        classify_tier(phi, TierScheme::SixTier)
                    )
                    .unwrap();
                }
            } else {
                out.push_str("journal_id,field_id,doc_filter,n,f,mu,sigma,phi,ci95_lo,ci95_hi,tier3,tier6\n");
                for s in journal_scores(&c, &sel)? {
                    let ci = s.confidence_interval(ConfidenceLevel::P95);
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{},{}",
                        csv_field(&s.journal_id),
                        csv_field(s.field.id()),
                        s.doc_filter,
                        s.n,
                        num(s.f, d),
                        num(s.mu, stat_d),
                        num(s.sigma, stat_d),
                        num(s.phi, d),
                        num(ci.lower, d),
                        num(ci.upper, d),
                        classify_tier(s.phi, TierScheme::ThreeTier),
                        classify_tier(s.phi, TierScheme::SixTier)
                    )
                    .unwrap();
                }
            }
            emit(input.output.as_deref(), &out, stdout)
        }

        Command::Rank {
            input,
            sel,
            by,
            decimals,
        } => {
            let c = load(&input)?;
            let scores = journal_scores(&c, &sel)?;
            let by_f = ranking_by(&scores, Key::F)?;
            let by_phi = ranking_by(&scores, Key::Phi)?;
            let rank_f: HashMap<&str, usize> = by_f.iter().map(|e| (e.journal_id.as_str(), e.rank)).collect();
            let rank_phi: HashMap<&str, usize> = by_phi.iter().map(|e| (e.journal_id.as_str(), e.rank)).collect();
            let phi_of: HashMap<&str, f64> = scores.iter().map(|s| (s.journal_id.as_str(), s.phi)).collect();
            let order = if by == Key::F { &by_f } else { &by_phi };
            let mut out = String::from("journal_id,n,f,phi,rank_f,rank_phi\n");
            for e in order {
                let id = e.journal_id.as_str();
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    csv_field(id),
                    e.n,
                    num(e.f, decimals),
                    num(phi_of[id], decimals),
                    rank_f[id],
                    rank_phi[id]
                )
                .unwrap();
            }
            emit(input.output.as_deref(), &out, stdout)
        }

        Command::Compare {
            input,
            sel,
            by,
            vs,
            top_k,
            transitions,
            decimals,
        } => {
            let c = load(&input)?;
            let scores = journal_scores(&c, &sel)?;
            let a = ranking_by(&scores, by)?;
            let b = ranking_by(&scores, vs)?;
            let mut cmp = compare(&a, &b, top_k)?;
            let by_f = ranking_by(&scores, Key::F)?;
            let phis: HashMap<String, f64> = scores.iter().map(|s| (s.journal_id.clone(), s.phi)).collect();
            cmp.inflection_rank = inflection_point_by_id(&by_f, &phis);

            let mut out = String::from("metric,value\n");
            writeln!(out, "journals,{}", a.len()).unwrap();
            writeln!(out, "kendall_tau,{}", num(cmp.tau, decimals)).unwrap();
            writeln!(out, "top_k,{}", cmp.top_k).unwrap();
            writeln!(out, "new_entries_top_k,{}", cmp.new_entries_top_k).unwrap();
            writeln!(
                out,
                "inflection_rank,{}",
                cmp.inflection_rank.map_or_else(String::new, |r| r.to_string())
            )
            .unwrap();
            writeln!(out, "changed_ranks,{}", cmp.transitions.len()).unwrap();

            if let Some(path) = transitions {
                let mut t = format!("journal_id,rank_{},rank_{},delta\n", by.name(), vs.name());
                for tr in &cmp.transitions {
                    writeln!(
                        t,
                        "{},{},{},{}",
                        csv_field(&tr.journal_id),
                        tr.rank_a,
                        tr.rank_b,
                        tr.improvement()
                    )
                    .unwrap();
                }
                emit(Some(&path), &t, stdout)?;
            }
            emit(input.output.as_deref(), &out, stdout)
        }

        Command::Simulate {
            input,
            format,
            journal_fields,
            field,
            doc_filter,
            sizes,
            draws,
            seed,
            replacement,
            envelope_k,
            envelope_out,
            output,
            decimals,
        } => {
            let grid = match sizes.as_deref() {
                Some(spec) => parse_sizes(spec).map_err(CliError::Usage)?,
                None => log_size_grid(10, 10_000, DEFAULT_GRID_POINTS),
            };
            let replacement = match replacement {
                ReplacementArg::With => Replacement::WithReplacement,
                ReplacementArg::Without => Replacement::WithoutReplacement,
            };
            let config =
                SimulationConfig::new(grid, draws, seed, replacement).map_err(|e| CliError::Usage(e.to_string()))?;
            if envelope_k.iter().any(|k| !(*k >= 0.0 && k.is_finite())) {
                return Err(CliError::Usage("--envelope-k values must be non-negative".into()));
            }

            let population = if is_population_file(&input)? {
                read_population(&input)?
            } else {
                let c = open_corpus(&input, format.as_deref(), journal_fields.as_deref())?;
                let sel: FieldSelector = field.parse().expect("infallible");
                c.papers_in_field(&sel)?
                    .into_iter()
                    .filter(|p| doc_filter.contains(p.doc_type))
                    .map(|p| p.citations)
                    .collect()
            };
            writeln!(stderr, "seed={seed}")?;
            let result = run_simulation(&population, &config)?;

            let mut out = String::from("n,f_n,phi\n");
            for p in &result.points {
                writeln!(out, "{},{},{}", p.n, num(p.f_n, decimals), num(p.phi, decimals)).unwrap();
            }

            let mut ks = envelope_k.clone();
            ks.sort_by(|a, b| b.total_cmp(a));
            ks.dedup();
            let envelopes = ks
                .iter()
                .map(|&k| clt_envelope(result.population_mu, result.population_sigma, k, &config.size_grid))
                .collect::<Result<Vec<_>, _>>()?;
            let mut env = String::from("n");
            for k in &ks {
                write!(env, ",lower_k{k},upper_k{k}").unwrap();
            }
            env.push('\n');
            for (i, n) in config.size_grid.iter().enumerate() {
                env.push_str(&n.to_string());
                for e in &envelopes {
                    write!(
                        env,
                        ",{},{}",
                        num(e.points[i].lower, decimals),
                        num(e.points[i].upper, decimals)
                    )
                    .unwrap();
                }
                env.push('\n');
            }
            let env_path = envelope_out.or_else(|| output.as_ref().map(|o| o.with_extension("envelope.csv")));
            if let Some(p) = env_path {
                emit(Some(&p), &env, stdout)?;
            }
            emit(output.as_deref(), &out, stdout)
        }

        Command::Tiers {
            input,
            sel,
            scheme,
            decimals,
        } => {
            let c = load(&input)?;
            let scores = journal_scores(&c, &sel)?;
            let phis: Vec<f64> = scores.iter().map(|s| s.phi).collect();
            let census = tier_census(&phis, scheme)?;
            let mut out = String::from("tier,criterion,journals,fraction\n");
            for t in census {
                writeln!(
                    out,
                    "{},{},{},{}",
                    t.tier,
                    tier_criterion(t.tier),
                    t.count,
                    num(t.fraction, decimals)
                )
                .unwrap();
            }
            emit(input.output.as_deref(), &out, stdout)
        }
    }
}

fn tier_criterion(tier: crate::phi::TierLabel) -> &'static str {
    use crate::phi::TierLabel::*;
    match tier {
        HighImpact => "phi > 1.96",
        AverageImpact => "-1.96 <= phi <= 1.96",
        LowImpact => "phi < -1.96",
        Significant => "phi > 3",
        Strong => "2 < phi <= 3",
        HighAverage => "0 < phi <= 2",
        LowAverage => "-2 < phi <= 0",
        Weak => "-3 < phi <= -2",
        Marginal => "phi <= -3",
    }
}

fn parse_sizes(spec: &str) -> Result<Vec<u64>, String> {
    let bad = || format!("invalid --sizes `{spec}` (use 10,100,1000 or log:MIN:MAX:COUNT)");
    if let Some(rest) = spec.strip_prefix("log:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let min: u64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: u64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if min == 0 || max < min || count == 0 {
            return Err(bad());
        }
        return Ok(log_size_grid(min, max, count));
    }
    let mut sizes = spec
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    sizes.sort_unstable();
    sizes.dedup();
    Ok(sizes)
}

/// A population file is a CSV whose header is a single `citations` column.
fn is_population_file(path: &Path) -> CliResult<bool> {
    let file = File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut first = String::new();
    BufReader::new(file).read_line(&mut first)?;
    Ok(first
        .trim()
        .trim_start_matches('\u{feff}')
        .eq_ignore_ascii_case("citations"))
}

fn read_population(path: &Path) -> CliResult<Vec<u64>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        match rec.get(0).and_then(|v| v.parse::<u64>().ok()) {
            Some(v) => values.push(v),
            None => {
                return data(format!(
                    "{}: line {line}: expected a non-negative integer",
                    path.display()
                ))
            }
        }
    }
    if values.is_empty() {
        return data(format!("{}: empty population", path.display()));
    }
    Ok(values)
}
