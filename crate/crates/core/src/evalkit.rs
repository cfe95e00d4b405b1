//! Precision, recall and rater agreement for delineation results.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{JournalId, PubId};
use crate::pipelines::Approach;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("unrated journals: {}", .0.iter().map(|j| j.as_str()).collect::<Vec<_>>().join(", "))]
    Unrated(Vec<JournalId>),
    #[error("precision of an empty journal set is undefined")]
    EmptySet,
    #[error("total recall pool must be positive")]
    ZeroPool,
    #[error("ballot for `{0}` has no answered votes")]
    NoVotes(String),
    #[error("no ballots given")]
    NoBallots,
    #[error("ballots mix approaches {0} and {1}")]
    MixedApproaches(Approach, Approach),
    #[error("relevance threshold {0} is outside (0, 1]")]
    BadThreshold(f64),
    #[error("no item reaches relevance threshold {0}")]
    NoRelevant(f64),
    #[error("kappa needs at least 2 items, got {0}")]
    TooFewItems(usize),
    #[error("item {item} has {n} ratings; kappa needs at least 2 per item")]
    TooFewRaters { item: usize, n: u64 },
    #[error("item {item} has {got} categories, expected {want}")]
    Ragged { item: usize, got: usize, want: usize },
}

fn io_err(path: &Path, source: std::io::Error) -> EvalError {
    EvalError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(line: usize, e: impl ToString) -> EvalError {
    EvalError::Csv {
        line,
        message: e.to_string(),
    }
}

/// Scope rating: 1 (field-only scope), 0.5 (partly) or 0 (outside).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rating {
    High,
    Medium,
    Low,
}

impl Rating {
    pub fn value(self) -> f64 {
        match self {
            Rating::High => 1.0,
            Rating::Medium => 0.5,
            Rating::Low => 0.0,
        }
    }

    pub fn parse(s: &str) -> Option<Rating> {
        let v: f64 = s.trim().parse().ok()?;
        if v == 1.0 {
            Some(Rating::High)
        } else if v == 0.5 {
            Some(Rating::Medium)
        } else if v == 0.0 {
            Some(Rating::Low)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScopeRatings {
    pub ratings: BTreeMap<JournalId, Rating>,
}

impl ScopeRatings {
    /// CSV `journal_id,rating[,note]`.
    pub fn from_csv_reader<R: Read>(r: R) -> Result<Self, EvalError> {
        let mut rdr = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(r);
        let mut ratings = BTreeMap::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| csv_err(line, e))?;
            if row.len() < 2 {
                return Err(csv_err(line, "expected journal_id,rating"));
            }
            let rating = Rating::parse(&row[1])
                .ok_or_else(|| csv_err(line, format!("rating {:?} is not 1, 0.5 or 0", &row[1])))?;
            if ratings.insert(JournalId::new(&row[0]), rating).is_some() {
                return Err(csv_err(line, format!("journal {} rated twice", &row[0])));
            }
        }
        Ok(ScopeRatings { ratings })
    }

    pub fn load(path: &Path) -> Result<Self, EvalError> {
        let f = fs::File::open(path).map_err(|e| io_err(path, e))?;
        Self::from_csv_reader(f)
    }

    pub fn get(&self, j: &JournalId) -> Option<Rating> {
        self.ratings.get(j).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScopePrecision {
    pub precision: f64,
    pub high: usize,
    pub medium: usize,
    pub low: usize,
}

fn rating_counts(journals: &BTreeSet<JournalId>, ratings: &ScopeRatings) -> Result<(usize, usize, usize), EvalError> {
    let mut c = (0, 0, 0);
    let mut missing = Vec::new();
    for j in journals {
        match ratings.get(j) {
            Some(Rating::High) => c.0 += 1,
            Some(Rating::Medium) => c.1 += 1,
            Some(Rating::Low) => c.2 += 1,
            None => missing.push(j.clone()),
        }
    }
    if missing.is_empty() {
        Ok(c)
    } else {
        Err(EvalError::Unrated(missing))
    }
}

/// `(high + 0.5 * medium) / |journals|`.
pub fn precision_by_scope(journals: &BTreeSet<JournalId>, ratings: &ScopeRatings) -> Result<ScopePrecision, EvalError> {
    let (high, medium, low) = rating_counts(journals, ratings)?;
    if journals.is_empty() {
        return Err(EvalError::EmptySet);
    }
    Ok(ScopePrecision {
        precision: (high as f64 + 0.5 * medium as f64) / journals.len() as f64,
        high,
        medium,
        low,
    })
}

/// `(high + medium) / total_recall`.
pub fn recall_journals(
    journals: &BTreeSet<JournalId>,
    ratings: &ScopeRatings,
    total_recall: usize,
) -> Result<f64, EvalError> {
    if total_recall == 0 {
        return Err(EvalError::ZeroPool);
    }
    let (high, medium, _) = rating_counts(journals, ratings)?;
    Ok((high + medium) as f64 / total_recall as f64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelevanceBallot {
    pub pub_id: PubId,
    pub approach: Approach,
    pub relevant: u32,
    pub not_relevant: u32,
    pub no_answer: u32,
}

pub fn item_precision(b: &RelevanceBallot) -> Result<f64, EvalError> {
    let answered = b.relevant + b.not_relevant;
    if answered == 0 {
        return Err(EvalError::NoVotes(b.pub_id.0.clone()));
    }
    Ok(b.relevant as f64 / answered as f64)
}

/// Unweighted mean of item precision over one approach's ballots.
pub fn approach_precision(ballots: &[RelevanceBallot]) -> Result<f64, EvalError> {
    let first = ballots.first().ok_or(EvalError::NoBallots)?;
    let mut sum = 0.0;
    for b in ballots {
        if b.approach != first.approach {
            return Err(EvalError::MixedApproaches(first.approach, b.approach));
        }
        sum += item_precision(b)?;
    }
    Ok(sum / ballots.len() as f64)
}

pub fn ballots_by_approach(ballots: &[RelevanceBallot]) -> BTreeMap<Approach, Vec<RelevanceBallot>> {
    let mut out: BTreeMap<Approach, Vec<RelevanceBallot>> = BTreeMap::new();
    for b in ballots {
        out.entry(b.approach).or_default().push(b.clone());
    }
    out
}

/// Each item is retrieved only by the approach it was sampled from.
pub fn stratum_membership(ballots: &[RelevanceBallot]) -> BTreeMap<PubId, BTreeSet<Approach>> {
    let mut m: BTreeMap<PubId, BTreeSet<Approach>> = BTreeMap::new();
    for b in ballots {
        m.entry(b.pub_id.clone()).or_default().insert(b.approach);
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachRecall {
    pub retrieved: usize,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublicationRecall {
    pub threshold: f64,
    pub relevant: Vec<PubId>,
    pub by_approach: BTreeMap<Approach, ApproachRecall>,
}

/// Share of the relevant items (item precision at or above `threshold`)
/// that each approach retrieves according to `membership`.
pub fn publication_recall(
    ballots: &[RelevanceBallot],
    membership: &BTreeMap<PubId, BTreeSet<Approach>>,
    threshold: f64,
) -> Result<PublicationRecall, EvalError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(EvalError::BadThreshold(threshold));
    }
    let mut relevant = BTreeSet::new();
    for b in ballots {
        if item_precision(b)? >= threshold {
            relevant.insert(b.pub_id.clone());
        }
    }
    if relevant.is_empty() {
        return Err(EvalError::NoRelevant(threshold));
    }
    let approaches: BTreeSet<Approach> = ballots
        .iter()
        .map(|b| b.approach)
        .chain(membership.values().flatten().copied())
        .collect();
    let by_approach = approaches
        .into_iter()
        .map(|a| {
            let retrieved = relevant
                .iter()
                .filter(|p| membership.get(*p).is_some_and(|s| s.contains(&a)))
                .count();
            (
                a,
                ApproachRecall {
                    retrieved,
                    recall: retrieved as f64 / relevant.len() as f64,
                },
            )
        })
        .collect();
    Ok(PublicationRecall {
        threshold,
        relevant: relevant.into_iter().collect(),
        by_approach,
    })
}

/// Items x categories vote counts; rows may have different totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaterMatrix {
    pub counts: Vec<Vec<u64>>,
}

impl RaterMatrix {
    pub fn new(counts: Vec<Vec<u64>>) -> Result<Self, EvalError> {
        if let Some(first) = counts.first() {
            let want = first.len();
            for (item, row) in counts.iter().enumerate() {
                if row.len() != want {
                    return Err(EvalError::Ragged {
                        item,
                        got: row.len(),
                        want,
                    });
                }
            }
        }
        Ok(RaterMatrix { counts })
    }

    /// Two categories per item (relevant, not relevant); no-answer votes dropped.
    pub fn from_ballots(ballots: &[RelevanceBallot]) -> Self {
        RaterMatrix {
            counts: ballots
                .iter()
                .map(|b| vec![b.relevant as u64, b.not_relevant as u64])
                .collect(),
        }
    }

    pub fn items(&self) -> usize {
        self.counts.len()
    }

    pub fn categories(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgreementBand {
    Poor,
    Slight,
    Fair,
    Moderate,
    Substantial,
    AlmostPerfect,
}

impl AgreementBand {
    /// Landis and Koch labels.
    pub fn for_kappa(k: f64) -> Self {
        if k < 0.0 {
            AgreementBand::Poor
        } else if k <= 0.20 {
            AgreementBand::Slight
        } else if k <= 0.40 {
            AgreementBand::Fair
        } else if k <= 0.60 {
            AgreementBand::Moderate
        } else if k <= 0.80 {
            AgreementBand::Substantial
        } else {
            AgreementBand::AlmostPerfect
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaReport {
    pub kappa: f64,
    pub observed: f64,
    pub expected: f64,
    pub band: AgreementBand,
    /// Expected agreement is 1, so kappa is reported as 1 by convention.
    pub degenerate: bool,
}

/// Fleiss's kappa with per-item rater counts.
pub fn fleiss_kappa(m: &RaterMatrix) -> Result<KappaReport, EvalError> {
    if m.items() < 2 {
        return Err(EvalError::TooFewItems(m.items()));
    }
    let cats = m.categories();
    let mut col = vec![0u64; cats];
    let mut total = 0u64;
    let mut p_sum = 0.0;
    for (item, row) in m.counts.iter().enumerate() {
        if row.len() != cats {
            return Err(EvalError::Ragged {
                item,
                got: row.len(),
                want: cats,
            });
        }
        let n: u64 = row.iter().sum();
        if n < 2 {
            return Err(EvalError::TooFewRaters { item, n });
        }
        let agree: u64 = row.iter().map(|&c| c * c.saturating_sub(1)).sum();
        p_sum += agree as f64 / (n * (n - 1)) as f64;
        for (j, &c) in row.iter().enumerate() {
            col[j] += c;
        }
        total += n;
    }
    let observed = p_sum / m.items() as f64;
    let expected: f64 = col.iter().map(|&c| (c as f64 / total as f64).powi(2)).sum();
    let degenerate = col.iter().filter(|&&c| c > 0).count() <= 1;
    let kappa = if degenerate {
        1.0
    } else {
        (observed - expected) / (1.0 - expected)
    };
    Ok(KappaReport {
        kappa,
        observed,
        expected,
        band: AgreementBand::for_kappa(kappa),
        degenerate,
    })
}

/// Single rater decision; `None` is "no answer".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaterVote {
    pub pub_id: PubId,
    pub approach: Approach,
    pub rater_id: String,
    pub field: String,
    pub subfield: String,
    pub vote: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BallotFile {
    Aggregate(Vec<RelevanceBallot>),
    RaterLevel(Vec<RaterVote>),
}

fn parse_count(s: &str, line: usize) -> Result<u32, EvalError> {
    s.trim()
        .parse()
        .map_err(|_| csv_err(line, format!("{s:?} is not a count")))
}

fn parse_approach(s: &str, line: usize) -> Result<Approach, EvalError> {
    Approach::parse(s).ok_or_else(|| csv_err(line, format!("unknown approach {s:?}")))
}

/// Either `pub_id,approach,relevant,not_relevant,no_answer` or
/// `pub_id,approach,rater_id,field,subfield,vote`; the header decides.
pub fn read_ballots<R: Read>(r: R) -> Result<BallotFile, EvalError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_err(1, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let rater_level = header.iter().any(|h| h == "rater_id");
    let want: &[&str] = if rater_level {
        &["pub_id", "approach", "rater_id", "field", "subfield", "vote"]
    } else {
        &["pub_id", "approach", "relevant", "not_relevant", "no_answer"]
    };
    if header != want {
        return Err(csv_err(1, format!("expected header {}", want.join(","))));
    }
    let mut agg = Vec::new();
    let mut votes = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| csv_err(line, e))?;
        let pub_id = PubId::new(&row[0]);
        let approach = parse_approach(&row[1], line)?;
        if rater_level {
            let vote = match row[5].to_ascii_lowercase().as_str() {
                "1" | "relevant" | "yes" => Some(true),
                "0" | "not_relevant" | "no" => Some(false),
                "" | "na" | "no_answer" => None,
                other => return Err(csv_err(line, format!("vote {other:?} is not 1, 0 or empty"))),
            };
            votes.push(RaterVote {
                pub_id,
                approach,
                rater_id: row[2].to_string(),
                field: row[3].to_string(),
                subfield: row[4].to_string(),
                vote,
            });
        } else {
            agg.push(RelevanceBallot {
                pub_id,
                approach,
                relevant: parse_count(&row[2], line)?,
                not_relevant: parse_count(&row[3], line)?,
                no_answer: parse_count(&row[4], line)?,
            });
        }
    }
    Ok(if rater_level {
        BallotFile::RaterLevel(votes)
    } else {
        BallotFile::Aggregate(agg)
    })
}

pub fn load_ballots(path: &Path) -> Result<BallotFile, EvalError> {
    let f = fs::File::open(path).map_err(|e| io_err(path, e))?;
    read_ballots(f)
}

/// Per-item aggregate of rater-level votes, ordered by pub_id.
pub fn aggregate_votes<'a>(votes: impl IntoIterator<Item = &'a RaterVote>) -> Vec<RelevanceBallot> {
    let mut m: BTreeMap<(PubId, Approach), RelevanceBallot> = BTreeMap::new();
    for v in votes {
        let b = m
            .entry((v.pub_id.clone(), v.approach))
            .or_insert_with(|| RelevanceBallot {
                pub_id: v.pub_id.clone(),
                approach: v.approach,
                relevant: 0,
                not_relevant: 0,
                no_answer: 0,
            });
        match v.vote {
            Some(true) => b.relevant += 1,
            Some(false) => b.not_relevant += 1,
            None => b.no_answer += 1,
        }
    }
    m.into_values().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Background {
    Field,
    Subfield,
}

/// Approach precision recomputed from the votes of each rater group.
/// Items with no answered vote inside a group are dropped; a group left
/// with no items is omitted.
pub fn precision_by_background(votes: &[RaterVote], key: Background) -> BTreeMap<(Approach, String), f64> {
    let mut groups: BTreeMap<(Approach, String), Vec<&RaterVote>> = BTreeMap::new();
    for v in votes {
        let g = match key {
            Background::Field => v.field.clone(),
            Background::Subfield => v.subfield.clone(),
        };
        groups.entry((v.approach, g)).or_default().push(v);
    }
    let mut out = BTreeMap::new();
    for (k, vs) in groups {
        let ballots: Vec<RelevanceBallot> = aggregate_votes(vs)
            .into_iter()
            .filter(|b| b.relevant + b.not_relevant > 0)
            .collect();
        match approach_precision(&ballots) {
            Ok(p) => {
                out.insert(k, p);
            }
            Err(_) => log::warn!("group {} / {} has no answered votes; omitted", k.0, k.1),
        }
    }
    out
}

/// Half-up rounding to two decimals, for display only.
pub fn round2(x: f64) -> f64 {
    (x * 100.0 + 0.5 + 1e-9).floor() / 100.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(id: &str, a: Approach, rel: u32, not: u32, na: u32) -> RelevanceBallot {
        RelevanceBallot {
            pub_id: PubId::new(id),
            approach: a,
            relevant: rel,
            not_relevant: not,
            no_answer: na,
        }
    }

    #[test]
    fn scope_formula() {
        let mut r = ScopeRatings::default();
        let mut set = BTreeSet::new();
        for i in 0..88 {
            let j = JournalId::new(format!("j{i}"));
            let rating = if i < 73 {
                Rating::High
            } else if i < 80 {
                Rating::Medium
            } else {
                Rating::Low
            };
            r.ratings.insert(j.clone(), rating);
            set.insert(j);
        }
        let p = precision_by_scope(&set, &r).unwrap();
        assert_eq!((p.high, p.medium, p.low), (73, 7, 8));
        assert_eq!(round2(p.precision), 0.87);
        assert_eq!(round2(recall_journals(&set, &r, 163).unwrap()), 0.49);
        assert_eq!(recall_journals(&BTreeSet::new(), &r, 163).unwrap(), 0.0);
        set.insert(JournalId::new("ghost"));
        match precision_by_scope(&set, &r) {
            Err(EvalError::Unrated(v)) => assert_eq!(v, vec![JournalId::new("ghost")]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn item_and_approach_precision() {
        assert!((item_precision(&b("x", Approach::A0, 42, 55, 1)).unwrap() - 42.0 / 97.0).abs() < 1e-12);
        assert_eq!(item_precision(&b("x", Approach::A0, 7, 0, 3)).unwrap(), 1.0);
        assert!(item_precision(&b("x", Approach::A0, 0, 0, 5)).is_err());
        let bs = [b("1", Approach::A1, 1, 1, 0), b("2", Approach::A1, 1, 0, 0)];
        assert_eq!(approach_precision(&bs).unwrap(), 0.75);
        let mixed = [b("1", Approach::A1, 1, 1, 0), b("2", Approach::A2, 1, 0, 0)];
        assert!(approach_precision(&mixed).is_err());
    }

    #[test]
    fn recall_by_membership() {
        let bs = vec![
            b("1", Approach::A1, 9, 1, 0),
            b("2", Approach::A2, 1, 9, 0),
            b("3", Approach::A2, 8, 2, 0),
        ];
        let r = publication_recall(&bs, &stratum_membership(&bs), 0.5).unwrap();
        assert_eq!(r.relevant.len(), 2);
        assert_eq!(r.by_approach[&Approach::A1].retrieved, 1);
        assert_eq!(r.by_approach[&Approach::A2].recall, 0.5);
        assert!(publication_recall(&bs, &stratum_membership(&bs), 0.95).is_err());
        assert!(publication_recall(&bs, &stratum_membership(&bs), 0.0).is_err());
    }

    #[test]
    fn kappa_cases() {
        let unanimous = RaterMatrix::new(vec![vec![5, 0], vec![5, 0]]).unwrap();
        let k = fleiss_kappa(&unanimous).unwrap();
        assert!(k.degenerate);
        assert_eq!(k.kappa, 1.0);
        let mixed = RaterMatrix::new(vec![vec![5, 0], vec![0, 5]]).unwrap();
        let k = fleiss_kappa(&mixed).unwrap();
        assert!(!k.degenerate);
        assert!((k.kappa - 1.0).abs() < 1e-12);
        assert!(fleiss_kappa(&RaterMatrix::new(vec![vec![1, 0], vec![2, 0]]).unwrap()).is_err());
        assert!(RaterMatrix::new(vec![vec![1, 0], vec![2]]).is_err());
    }

    #[test]
    fn bands() {
        use AgreementBand::*;
        let cases = [
            (-0.1, Poor),
            (0.0, Slight),
            (0.2, Slight),
            (0.27, Fair),
            (0.5, Moderate),
            (0.8, Substantial),
            (0.81, AlmostPerfect),
        ];
        for (k, want) in cases {
            assert_eq!(AgreementBand::for_kappa(k), want, "{k}");
        }
    }

    #[test]
    fn ballot_files() {
        let agg = "pub_id,approach,relevant,not_relevant,no_answer\nS1,A1,3,2,1\n";
        assert!(matches!(read_ballots(agg.as_bytes()).unwrap(), BallotFile::Aggregate(v) if v.len() == 1));
        let raters = "pub_id,approach,rater_id,field,subfield,vote\nS1,A1,r1,Physics,Optics,1\nS1,A1,r2,Chemistry,Polymers,0\nS1,A1,r3,Physics,Optics,\n";
        let BallotFile::RaterLevel(v) = read_ballots(raters.as_bytes()).unwrap() else {
            panic!()
        };
        let a = aggregate_votes(&v);
        assert_eq!((a[0].relevant, a[0].not_relevant, a[0].no_answer), (1, 1, 1));
        let by = precision_by_background(&v, Background::Field);
        assert_eq!(by[&(Approach::A1, "Physics".to_string())], 1.0);
        assert_eq!(by[&(Approach::A1, "Chemistry".to_string())], 0.0);
        assert!(read_ballots("a,b\n".as_bytes()).is_err());
    }

    #[test]
    fn rounding_half_up() {
        assert_eq!(round2(0.865), 0.87);
        assert_eq!(round2(0.8549), 0.85);
    }
}
