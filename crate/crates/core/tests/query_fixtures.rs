use std::collections::BTreeSet;
use std::sync::Arc;

use fieldscope::corpus::{Corpus, CorpusFormat, JournalRegistry, LoadOptions, PubId};
use fieldscope::lexquery::{
    evaluate, parse_query, parse_query_file, Dialect, EvalFilters, ParseOptions, Query, QueryFile,
};

const SCOPUS: &str = include_str!("../fixtures/queries/scopus.txt");
const WOS: &str = include_str!("../fixtures/queries/wos.txt");
const MINI: &str = include_str!("data/mini_corpus.jsonl");
const MINI_REGISTRY: &str = include_str!("data/mini_registry.jsonl");
const MINI_EXPECTED: &str = include_str!("data/mini_expected.csv");

fn lenient() -> ParseOptions {
    ParseOptions { lenient: true }
}

fn mini() -> Corpus {
    let reg = Arc::new(JournalRegistry::from_jsonl_str(MINI_REGISTRY).unwrap());
    Corpus::from_str(MINI, CorpusFormat::Jsonl, reg, LoadOptions::default()).unwrap()
}

/// Column 1 is the scopus-like verdict, column 2 the wos-like one.
fn expected(col: usize) -> BTreeSet<PubId> {
    MINI_EXPECTED
        .lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<&str> = l.splitn(4, ',').collect();
            (f[col] == "1").then(|| PubId::new(f[0]))
        })
        .collect()
}

fn final_of(f: &QueryFile) -> &Query {
    f.final_query.as_deref().unwrap()
}

#[test]
fn scopus_file_parses_with_repairs() {
    let f = parse_query_file(SCOPUS, Dialect::ScopusLike, lenient()).unwrap();
    assert_eq!(f.definitions.len(), 15);
    let labels: BTreeSet<&str> = f.warnings.iter().map(|(l, _)| l.as_str()).collect();
    assert_eq!(labels, ["#12", "#13"].into_iter().collect());
    assert_eq!(final_of(&f).references().len(), 15);
    assert!(parse_query_file(SCOPUS, Dialect::ScopusLike, ParseOptions::default()).is_err());
}

#[test]
fn wos_file_parses_with_repairs() {
    let f = parse_query_file(WOS, Dialect::WosLike, lenient()).unwrap();
    assert_eq!(f.definitions.len(), 53);
    assert!(matches!(final_of(&f), Query::Not(_, _)));
    let refs = final_of(&f).references();
    assert!(!refs.contains("#20"), "FINAL is kept verbatim");
    assert_eq!(refs.len(), 52);
}

#[test]
fn canonical_text_round_trips() {
    for (text, d) in [(SCOPUS, Dialect::ScopusLike), (WOS, Dialect::WosLike)] {
        let f = parse_query_file(text, d, lenient()).unwrap();
        let env = f.env();
        for (label, q) in &f.definitions {
            let printed = q.to_text(d);
            let again = parse_query(&printed, d, &env).unwrap_or_else(|e| panic!("{label}: {e}"));
            assert_eq!(&again, q.as_ref(), "{label}");
        }
    }
}

#[test]
fn scopus_final_on_mini_corpus() {
    let f = parse_query_file(SCOPUS, Dialect::ScopusLike, lenient()).unwrap();
    let got = evaluate(final_of(&f), &mini(), &EvalFilters::default());
    assert_eq!(got, expected(1));
}

#[test]
fn wos_final_on_mini_corpus() {
    let f = parse_query_file(WOS, Dialect::WosLike, lenient()).unwrap();
    let got = evaluate(final_of(&f), &mini(), &EvalFilters::default());
    assert_eq!(got, expected(2));
}
