//! Fixture-driven check of the reference delineation numbers.
//!
//! Every check compares a computed value with an expected one under a stated
//! tolerance. Values that cannot be derived from the bundled data are listed
//! as notes and never affect the verdict.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::corpus::{CorpusError, JournalRegistry, JournalStatus};
use crate::evalkit::{
    approach_precision, ballots_by_approach, fleiss_kappa, precision_by_scope, publication_recall, read_ballots,
    recall_journals, stratum_membership, BallotFile, EvalError, RaterMatrix, RelevanceBallot, ScopeRatings,
};
use crate::lexquery::{parse_query_file, title_prefix_search, Dialect, ParseOptions, QueryFileError};
use crate::pipelines::{compare, run_category_approach, Approach, DelineationConfig, DelineationResult, PipelineError};

#[derive(Debug, thiserror::Error)]
pub enum ReproError {
    #[error("fixture {name}: {message}")]
    Fixture { name: String, message: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Query(#[from] QueryFileError),
}

/// Raw fixture texts, bundled or read from a directory with the same layout.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    pub registry: String,
    pub a1: String,
    pub a2: String,
    pub a3: String,
    pub ratings: String,
    pub ballots: String,
    pub scopus_query: String,
    pub wos_query: String,
}

const FILES: [&str; 8] = [
    "registry.jsonl",
    "a1_result.json",
    "a2_result.json",
    "a3_result.json",
    "scope_ratings.csv",
    "ballots.csv",
    "queries/scopus.txt",
    "queries/wos.txt",
];

impl FixtureSet {
    pub fn bundled() -> Self {
        FixtureSet {
            registry: include_str!("../fixtures/registry.jsonl").into(),
            a1: include_str!("../fixtures/a1_result.json").into(),
            a2: include_str!("../fixtures/a2_result.json").into(),
            a3: include_str!("../fixtures/a3_result.json").into(),
            ratings: include_str!("../fixtures/scope_ratings.csv").into(),
            ballots: include_str!("../fixtures/ballots.csv").into(),
            scopus_query: include_str!("../fixtures/queries/scopus.txt").into(),
            wos_query: include_str!("../fixtures/queries/wos.txt").into(),
        }
    }

    pub fn from_dir(dir: &Path) -> Result<Self, ReproError> {
        let mut t: Vec<String> = Vec::new();
        for f in FILES {
            let p = dir.join(f);
            t.push(fs::read_to_string(&p).map_err(|e| ReproError::Fixture {
                name: p.display().to_string(),
                message: e.to_string(),
            })?);
        }
        let mut it = t.into_iter();
        let mut next = || it.next().unwrap();
        Ok(FixtureSet {
            registry: next(),
            a1: next(),
            a2: next(),
            a3: next(),
            ratings: next(),
            ballots: next(),
            scopus_query: next(),
            wos_query: next(),
        })
    }

    /// The bundled files, as they would be written under `dir` by `from_dir`.
    pub fn files(&self) -> Vec<(&'static str, &str)> {
        FILES
            .into_iter()
            .zip([
                &self.registry,
                &self.a1,
                &self.a2,
                &self.a3,
                &self.ratings,
                &self.ballots,
                &self.scopus_query,
                &self.wos_query,
            ])
            .map(|(n, s)| (n, s.as_str()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Note {
    pub name: String,
    pub published: Option<f64>,
    pub computed: f64,
    pub remark: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproReport {
    pub checks: Vec<Check>,
    pub notes: Vec<Note>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Expected-versus-computed lines for failing checks only.
    pub fn diff(&self) -> String {
        let mut s = String::new();
        for c in self.failures() {
            let _ = writeln!(
                s,
                "- {}: expected {} (tolerance {}), computed {} (off by {:.6})",
                c.name,
                c.expected,
                c.tolerance,
                c.computed,
                (c.computed - c.expected).abs()
            );
        }
        s
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} {:<34} expected {:>9.4} ±{:<6} computed {:>9.6}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.expected,
                c.tolerance,
                c.computed
            );
        }
        for n in &self.notes {
            let published = n.published.map(|p| format!("{p}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "NOTE {:<34} published {:>6} computed {:>9.6}  {}",
                n.name, published, n.computed, n.remark
            );
        }
        let failed = self.failures().len();
        let _ = writeln!(
            s,
            "{} of {} checks passed",
            self.checks.len() - failed,
            self.checks.len()
        );
        if failed > 0 {
            s.push_str(&self.diff());
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

struct Builder {
    checks: Vec<Check>,
    notes: Vec<Note>,
}

impl Builder {
    fn check(&mut self, name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            expected,
            computed,
            tolerance,
            pass: (computed - expected).abs() <= tolerance + 1e-12,
        });
    }

    fn exact(&mut self, name: impl Into<String>, expected: usize, computed: usize) {
        self.check(name, expected as f64, computed as f64, 0.0);
    }

    fn note(&mut self, name: &str, published: Option<f64>, computed: f64, remark: &str) {
        self.notes.push(Note {
            name: name.into(),
            published,
            computed,
            remark: remark.into(),
        });
    }
}

fn parse_result(name: &str, text: &str) -> Result<DelineationResult, ReproError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| ReproError::Fixture {
        name: name.into(),
        message: e.to_string(),
    })
}

/// Journal-level scope precision and recall to three decimals.
const JOURNAL_LEVEL: [(Approach, f64, f64); 3] = [
    (Approach::A1, 0.870, 0.491),
    (Approach::A2, 0.855, 0.442),
    (Approach::A3, 0.885, 0.644),
];
const PUBLICATION_LEVEL: [(Approach, f64); 4] = [
    (Approach::A0, 0.56),
    (Approach::A1, 0.47),
    (Approach::A2, 0.62),
    (Approach::A3, 0.56),
];
const VENN: [(&[Approach], usize); 7] = [
    (&[Approach::A1, Approach::A2, Approach::A3], 44),
    (&[Approach::A1, Approach::A2], 7),
    (&[Approach::A1, Approach::A3], 15),
    (&[Approach::A2, Approach::A3], 4),
    (&[Approach::A1], 22),
    (&[Approach::A2], 21),
    (&[Approach::A3], 50),
];

pub fn reproduce(fx: &FixtureSet) -> Result<ReproReport, ReproError> {
    let registry = JournalRegistry::from_jsonl_str(&fx.registry)?;
    let results = [
        parse_result("a1_result.json", &fx.a1)?,
        parse_result("a2_result.json", &fx.a2)?,
        parse_result("a3_result.json", &fx.a3)?,
    ];
    for r in &results {
        if let Some(e) = r.journals.iter().find(|e| !registry.contains(&e.journal_id)) {
            return Err(ReproError::Fixture {
                name: format!("{} result", r.approach),
                message: format!("journal {} is not in the registry", e.journal_id),
            });
        }
    }
    let ratings = ScopeRatings::from_csv_reader(fx.ratings.as_bytes())?;
    let ballots: Vec<RelevanceBallot> = match read_ballots(fx.ballots.as_bytes())? {
        BallotFile::Aggregate(b) => b,
        BallotFile::RaterLevel(_) => {
            return Err(ReproError::Fixture {
                name: "ballots.csv".into(),
                message: "expected aggregate ballots".into(),
            })
        }
    };
    let mut b = Builder {
        checks: Vec::new(),
        notes: Vec::new(),
    };

    let venn = compare(&results.iter().collect::<Vec<_>>())?;
    for (pattern, n) in VENN {
        b.exact(
            format!("venn.{}", crate::pipelines::venn_label(pattern)),
            n,
            venn.count(pattern),
        );
    }
    b.exact("venn.total", 163, venn.total);
    for (a, n) in [(Approach::A1, 88), (Approach::A2, 76), (Approach::A3, 113)] {
        b.exact(
            format!("venn.size.{a}"),
            n,
            venn.per_approach.get(&a).copied().unwrap_or(0),
        );
    }

    for (r, (a, p, rc)) in results.iter().zip(JOURNAL_LEVEL) {
        let set = r.journal_set();
        let sp = precision_by_scope(&set, &ratings)?;
        b.check(format!("journal.precision.{a}"), p, sp.precision, 0.005);
        b.check(
            format!("journal.recall.{a}"),
            rc,
            recall_journals(&set, &ratings, venn.total)?,
            0.005,
        );
    }

    let by = ballots_by_approach(&ballots);
    for (a, p) in PUBLICATION_LEVEL {
        let got = match by.get(&a) {
            Some(v) => approach_precision(v)?,
            None => f64::NAN,
        };
        b.check(format!("publication.precision.{a}"), p, got, 0.01);
    }
    let membership = stratum_membership(&ballots);
    let strict = publication_recall(&ballots, &membership, 0.8)?;
    b.exact("ballots.relevant_at_0.8", 13, strict.relevant.len());

    // Cross-checks that tie the result fixtures to the registry.
    let cfg = DelineationConfig::default();
    let a1 = run_category_approach(&registry, &cfg);
    b.exact("registry.category_members", 88, a1.len());
    b.exact(
        "registry.category_equals_a1_fixture",
        results[0].len(),
        a1.journal_set().intersection(&results[0].journal_set()).count(),
    );
    let active: BTreeSet<JournalStatus> = [JournalStatus::Active].into_iter().collect();
    b.exact(
        "registry.prefix_matches",
        91,
        title_prefix_search(&registry, &cfg.nano_pattern, &active).len(),
    );
    let lenient = ParseOptions { lenient: true };
    let sq = parse_query_file(&fx.scopus_query, Dialect::ScopusLike, lenient)?;
    let wq = parse_query_file(&fx.wos_query, Dialect::WosLike, lenient)?;
    b.exact("queries.scopus_like.definitions", 15, sq.definitions.len());
    b.exact("queries.wos_like.definitions", 53, wq.definitions.len());

    let loose = publication_recall(&ballots, &membership, 0.5)?;
    for (a, published) in [
        (Approach::A0, 0.38),
        (Approach::A1, 0.34),
        (Approach::A2, 0.34),
        (Approach::A3, 0.46),
    ] {
        let r = loose.by_approach.get(&a).map(|x| x.recall).unwrap_or(0.0);
        b.note(
            &format!("publication.recall.{a}"),
            Some(published),
            r,
            "stratum-only membership at threshold 0.5; cross-approach matches are unpublished",
        );
    }
    let kappa = fleiss_kappa(&RaterMatrix::from_ballots(&ballots))?;
    b.note(
        "agreement.kappa.overall",
        Some(0.27),
        kappa.kappa,
        "aggregate counts only; rater-level panels are unpublished",
    );
    Ok(ReproReport {
        checks: b.checks,
        notes: b.notes,
    })
}
