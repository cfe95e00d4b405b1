//! Cited-journal tallies over a publication set.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::breakpoint::{ScreePoint, ScreeSeries};
use crate::corpus::{Corpus, JournalId, JournalRegistry, PubId, Scheme};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CiteError {
    #[error("publication `{0}` is not in the corpus")]
    UnknownPub(String),
    #[error("top_n needs n >= 2, got {0}")]
    BadN(usize),
    #[error("tally has {0} rows; a scree fit needs at least 2")]
    TooFewRows(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallyRow {
    pub rank: usize,
    pub journal_id: JournalId,
    pub canonical_title: String,
    pub citations: u64,
    pub pct: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CitationTally {
    pub rows: Vec<TallyRow>,
    pub excluded: BTreeSet<JournalId>,
    /// Citations that went to excluded journals.
    pub excluded_citations: u64,
}

/// Denominator for `pct`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PctBasis {
    /// Citations remaining after exclusion; rows sum to 1.
    #[default]
    AfterExclusion,
    /// Every citation, excluded journals included.
    AllCitations,
}

pub fn cited_journal_tally(
    pubs: &BTreeSet<PubId>,
    corpus: &Corpus,
    exclusion: &BTreeSet<JournalId>,
) -> Result<CitationTally, CiteError> {
    cited_journal_tally_with(pubs, corpus, exclusion, PctBasis::AfterExclusion)
}

pub fn cited_journal_tally_with(
    pubs: &BTreeSet<PubId>,
    corpus: &Corpus,
    exclusion: &BTreeSet<JournalId>,
    basis: PctBasis,
) -> Result<CitationTally, CiteError> {
    let docs = pubs
        .iter()
        .map(|p| corpus.position(p).ok_or_else(|| CiteError::UnknownPub(p.0.clone())))
        .collect::<Result<Vec<u32>, _>>()?;
    Ok(tally_docs(&docs, corpus, exclusion, basis))
}

pub(crate) fn tally_docs(
    docs: &[u32],
    corpus: &Corpus,
    exclusion: &BTreeSet<JournalId>,
    basis: PctBasis,
) -> CitationTally {
    let reg = corpus.registry();
    let counts: HashMap<u32, u64> = docs
        .par_iter()
        .fold(HashMap::new, |mut m, &d| {
            for &j in corpus.cited_indices_of_doc(d) {
                *m.entry(j).or_insert(0) += 1;
            }
            m
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    build_tally(counts, reg, exclusion, basis)
}

fn build_tally(
    counts: HashMap<u32, u64>,
    reg: &JournalRegistry,
    exclusion: &BTreeSet<JournalId>,
    basis: PctBasis,
) -> CitationTally {
    let mut excluded_citations = 0;
    let mut rows: Vec<(u64, &str, &JournalId)> = Vec::new();
    for (idx, n) in counts {
        let j = reg.by_index(idx as usize);
        if exclusion.contains(&j.journal_id) {
            excluded_citations += n;
        } else {
            rows.push((n, j.canonical_title.as_str(), &j.journal_id));
        }
    }
    rows.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)).then(a.2.cmp(b.2)));
    let included: u64 = rows.iter().map(|r| r.0).sum();
    let denom = match basis {
        PctBasis::AfterExclusion => included,
        PctBasis::AllCitations => included + excluded_citations,
    };
    CitationTally {
        rows: rows
            .into_iter()
            .enumerate()
            .map(|(i, (n, title, id))| TallyRow {
                rank: i + 1,
                journal_id: id.clone(),
                canonical_title: title.to_string(),
                citations: n,
                pct: n as f64 / denom as f64,
            })
            .collect(),
        excluded: exclusion.clone(),
        excluded_citations,
    }
}

/// Journals flagged multidisciplinary or filed under the scheme's general
/// category ("Multidisciplinary Sciences" style or "General" style names).
pub fn multidisciplinary_set(registry: &JournalRegistry, scheme: Scheme) -> BTreeSet<JournalId> {
    let general: &[&str] = match scheme {
        Scheme::WosLike => &["Multidisciplinary Sciences", "Multidisciplinary"],
        Scheme::SjrLike => &["Multidisciplinary", "General"],
    };
    registry
        .iter()
        .filter(|j| j.multidisciplinary || general.iter().any(|g| j.in_category(scheme, g)))
        .map(|j| j.journal_id.clone())
        .collect()
}

/// First `min(n, len)` rows as a scree series of pct values.
pub fn top_n(tally: &CitationTally, n: usize) -> Result<ScreeSeries, CiteError> {
    if n < 2 {
        return Err(CiteError::BadN(n));
    }
    if tally.rows.len() < 2 {
        return Err(CiteError::TooFewRows(tally.rows.len()));
    }
    Ok(ScreeSeries {
        points: tally
            .rows
            .iter()
            .take(n)
            .map(|r| ScreePoint {
                rank: r.rank,
                value: r.pct,
                journal_id: Some(r.journal_id.clone()),
            })
            .collect(),
    })
}

/// CSV `rank,journal_id,canonical_title,citations,pct`.
pub fn write_tally_csv<W: Write>(tally: &CitationTally, w: W) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(["rank", "journal_id", "canonical_title", "citations", "pct"])?;
    for r in &tally.rows {
        out.write_record([
            r.rank.to_string(),
            r.journal_id.0.clone(),
            r.canonical_title.clone(),
            r.citations.to_string(),
            format!("{:.6}", r.pct),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CategoryRef, DocType, JournalRecord, LoadOptions, Origin, PublicationRecord};
    use std::sync::Arc;

    fn corpus() -> Corpus {
        let mut recs: Vec<JournalRecord> = ["A", "B", "C", "S"].iter().map(|t| JournalRecord::new(t, t)).collect();
        recs[2].categories.push(CategoryRef {
            scheme: Scheme::WosLike,
            name: "Multidisciplinary Sciences".into(),
        });
        let reg = Arc::new(JournalRegistry::from_records(recs).unwrap());
        let p = |id: &str, cited: &[&str]| PublicationRecord {
            pub_id: PubId::new(id),
            doc_type: DocType::Article,
            year: 2010,
            title: String::new(),
            abstract_text: String::new(),
            author_keywords: vec![],
            keywords_plus: vec![],
            journal_id: JournalId::new("S"),
            cited_journal_ids: cited.iter().map(|c| JournalId::new(*c)).collect(),
            origin: Origin::WosLike,
        };
        Corpus::from_records(
            vec![p("1", &["A", "A", "B"]), p("2", &["B", "C"])],
            reg,
            LoadOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn hand_count() {
        let c = corpus();
        let pubs = [PubId::new("1"), PubId::new("2")].into_iter().collect();
        let excl = [JournalId::new("C")].into_iter().collect();
        let t = cited_journal_tally(&pubs, &c, &excl).unwrap();
        let got: Vec<(&str, u64, f64)> = t
            .rows
            .iter()
            .map(|r| (r.journal_id.as_str(), r.citations, r.pct))
            .collect();
        assert_eq!(got, vec![("A", 2, 0.5), ("B", 2, 0.5)]);
        assert_eq!(t.excluded_citations, 1);
        let all = cited_journal_tally_with(&pubs, &c, &excl, PctBasis::AllCitations).unwrap();
        assert!((all.rows[0].pct - 0.4).abs() < 1e-12);
    }

    #[test]
    fn empty_and_top_n() {
        let c = corpus();
        let t = cited_journal_tally(&BTreeSet::new(), &c, &BTreeSet::new()).unwrap();
        assert!(t.rows.is_empty());
        assert_eq!(top_n(&t, 10), Err(CiteError::TooFewRows(0)));
        let pubs = [PubId::new("1"), PubId::new("2")].into_iter().collect();
        let t = cited_journal_tally(&pubs, &c, &BTreeSet::new()).unwrap();
        assert_eq!(top_n(&t, 100).unwrap().len(), 3);
        assert_eq!(top_n(&t, 2).unwrap().len(), 2);
        assert_eq!(top_n(&t, 1), Err(CiteError::BadN(1)));
    }

    #[test]
    fn unknown_pub() {
        let pubs = [PubId::new("zz")].into_iter().collect();
        assert!(cited_journal_tally(&pubs, &corpus(), &BTreeSet::new()).is_err());
    }

    #[test]
    fn multidisciplinary_by_category() {
        let c = corpus();
        let m = multidisciplinary_set(c.registry(), Scheme::WosLike);
        assert_eq!(m, [JournalId::new("C")].into_iter().collect());
        assert!(multidisciplinary_set(c.registry(), Scheme::SjrLike).is_empty());
        assert!(multidisciplinary_set(&JournalRegistry::default(), Scheme::WosLike).is_empty());
    }

    #[test]
    fn csv_export() {
        let c = corpus();
        let pubs = [PubId::new("1")].into_iter().collect();
        let t = cited_journal_tally(&pubs, &c, &BTreeSet::new()).unwrap();
        let mut buf = Vec::new();
        write_tally_csv(&t, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "rank,journal_id,canonical_title,citations,pct\n1,A,A,2,0.666667\n2,B,B,1,0.333333\n"
        );
    }
}
