mod common;

use std::collections::BTreeSet;

use common::synthetic_corpus;
use phi_core::corpus::{load_corpus, Corpus, CorpusFormat, DocType, DocTypeSet, FieldSelector, Paper};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn roundtrip(c: &Corpus, format: CorpusFormat) -> Corpus {
    let mut buf = Vec::new();
    c.write(&mut buf, format).unwrap();
    load_corpus(buf.as_slice(), format).unwrap()
}

#[test]
fn jsonl_round_trip_of_generated_corpus() {
    let c = synthetic_corpus(1, 40, 50);
    assert!(c.len() >= 1000 / 2);
    let c = Corpus::from_papers(c.papers()[..1000.min(c.len())].to_vec()).unwrap();
    assert_eq!(roundtrip(&c, CorpusFormat::Jsonl), c);
    assert_eq!(roundtrip(&c, CorpusFormat::Csv), c);
}

#[test]
fn aggregate_matches_summation_oracle() {
    let c = synthetic_corpus(2, 1, 1000);
    let journal = &c.papers()[0].journal_id;
    let filter = DocTypeSet::EVERYTHING;
    let agg = c.journal_aggregate(journal, filter).unwrap();

    let mut total: u128 = 0;
    let mut count = 0u64;
    for p in c.papers() {
        total += p.citations as u128;
        count += 1;
    }
    assert_eq!(agg.n, count);
    assert_eq!(agg.f.to_bits(), (total as f64 / count as f64).to_bits());
    assert_eq!(agg.total_citations().round() as u128, total);
}

#[test]
fn per_field_counts_sum_to_memberships() {
    let c = synthetic_corpus(3, 60, 30);
    let per_field: usize = c
        .fields()
        .keys()
        .map(|f| c.papers_in_field(&FieldSelector::Field(f.clone())).unwrap().len())
        .sum();
    let memberships: usize = c.papers().iter().map(|p| p.field_ids.len()).sum();
    assert_eq!(per_field, memberships);
}

#[test]
fn doc_type_splits_are_additive() {
    let c = synthetic_corpus(4, 30, 40);
    for journal in c.journals().keys() {
        let get = |f| c.journal_aggregate(journal, f).ok();
        let (a, r, ar) = (
            get(DocTypeSet::ARTICLES),
            get(DocTypeSet::REVIEWS),
            get(DocTypeSet::CITABLE),
        );
        let n = |x: &Option<phi_core::JournalAggregate>| x.as_ref().map_or(0, |a| a.n);
        let s = |x: &Option<phi_core::JournalAggregate>| x.as_ref().map_or(0.0, |a| a.total_citations());
        assert_eq!(n(&ar), n(&a) + n(&r));
        assert!((s(&ar) - s(&a) - s(&r)).abs() < 1e-6);
    }
}

#[test]
fn aggregates_ignore_paper_order() {
    let c = synthetic_corpus(5, 20, 40);
    let mut papers = c.papers().to_vec();
    papers.shuffle(&mut ChaCha8Rng::seed_from_u64(5));
    let shuffled = Corpus::from_papers(papers).unwrap();
    for f in [FieldSelector::All, FieldSelector::Field("OPTICS".into())] {
        assert_eq!(
            c.journal_aggregates(&f, DocTypeSet::CITABLE).unwrap(),
            shuffled.journal_aggregates(&f, DocTypeSet::CITABLE).unwrap()
        );
    }
}

#[test]
fn review_only_journals_vanish_from_article_rankings() {
    // 50 journals, 11 of which publish only reviews.
    let mut papers = Vec::new();
    for j in 0..50 {
        for k in 0..6 {
            let doc_type = if j < 11 || (j % 3 == 0 && k == 0) {
                DocType::Review
            } else {
                DocType::Article
            };
            papers.push(Paper {
                paper_id: format!("{j}-{k}"),
                journal_id: format!("J{j:02}"),
                citations: (j * 7 + k) as u64,
                doc_type,
                field_ids: BTreeSet::new(),
            });
        }
    }
    let c = Corpus::from_papers(papers).unwrap();
    let all = c.journal_aggregates(&FieldSelector::All, DocTypeSet::CITABLE).unwrap();
    let reviews = c.journal_aggregates(&FieldSelector::All, DocTypeSet::REVIEWS).unwrap();
    let only_reviews = reviews
        .iter()
        .filter(|r| all.iter().any(|a| a.journal_id == r.journal_id && a.n == r.n))
        .count();
    assert_eq!(only_reviews, 11);
    let articles = c.filter_doc_types(DocTypeSet::ARTICLES);
    let with_articles = articles
        .journal_aggregates(&FieldSelector::All, DocTypeSet::ARTICLES)
        .unwrap();
    assert_eq!(all.len() - with_articles.len(), 11);
}

fn arb_paper() -> impl Strategy<Value = (String, u8, u32, u8, BTreeSet<u8>)> {
    (
        "[a-z0-9]{1,6}",
        0u8..5,
        0u32..100_000,
        0u8..3,
        prop::collection::btree_set(0u8..4, 0..3),
    )
}

proptest! {
    #[test]
    fn load_serialize_load_is_identity(rows in prop::collection::btree_map("[A-Za-z0-9_.-]{1,8}", arb_paper(), 1..40)) {
        let papers: Vec<Paper> = rows
            .into_iter()
            .map(|(id, (_, j, cites, t, fields))| Paper {
                paper_id: id,
                journal_id: format!("journal {j}"),
                citations: cites as u64,
                doc_type: [DocType::Article, DocType::Review, DocType::Other][t as usize],
                field_ids: fields.into_iter().map(|f| format!("F{f}")).collect(),
            })
            .collect();
        let c = Corpus::from_papers(papers).unwrap();
        for format in [CorpusFormat::Csv, CorpusFormat::Jsonl] {
            prop_assert_eq!(&roundtrip(&c, format), &c);
        }
    }

    #[test]
    fn filtering_is_idempotent(seed in 0u64..50, code in "(A|R|AR|O|ARO)") {
        let c = synthetic_corpus(seed, 5, 20);
        let f: DocTypeSet = code.parse().unwrap();
        let once = c.filter_doc_types(f);
        prop_assert_eq!(once.filter_doc_types(f), once.clone());
        prop_assert!(once.papers().iter().all(|p| f.contains(p.doc_type)));
    }
}
