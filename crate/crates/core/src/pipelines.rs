//! The three delineation approaches and their set comparison.
//!
//! * A1 takes a subject category from the registry.
//! * A2 selects micro-clusters that overlap a retrieved publication set and
//!   keeps the journals that publish enough inside them.
//! * A3 runs the seven-step journal-level procedure per database and unions
//!   the outcome.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::breakpoint::{fit_breakpoint, select_core_set, BreakpointError, BreakpointFit, ScreeMode};
use crate::citestats::{multidisciplinary_set, tally_docs, top_n, CitationTally, CiteError, PctBasis};
use crate::corpus::{
    ClusterAssignments, Corpus, DocType, JournalId, JournalRegistry, JournalStatus, Origin, PubId, Scheme,
};
use crate::lexquery::{evaluate_docs, title_prefix_search, EvalFilters, Query};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}: no publications for this origin")]
    EmptyOrigin(Origin),
    #[error("{origin} step {step}: {source}")]
    Cite {
        origin: Origin,
        step: u8,
        #[source]
        source: CiteError,
    },
    #[error("{origin} step {step}: {source}")]
    Scree {
        origin: Origin,
        step: u8,
        #[source]
        source: BreakpointError,
    },
    #[error("approach {0} given more than once")]
    DuplicateApproach(Approach),
    #[error("comparison needs 2 or 3 results, got {0}")]
    CompareArity(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Approach {
    A0,
    A1,
    A2,
    A3,
}

impl Approach {
    pub const ALL: [Approach; 4] = [Approach::A0, Approach::A1, Approach::A2, Approach::A3];

    pub fn as_str(self) -> &'static str {
        match self {
            Approach::A0 => "A0",
            Approach::A1 => "A1",
            Approach::A2 => "A2",
            Approach::A3 => "A3",
        }
    }

    pub fn parse(s: &str) -> Option<Approach> {
        Approach::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinPubsBasis {
    /// Count of the journal's publications inside kept clusters.
    #[default]
    InCluster,
    /// The journal's window total.
    WholeJournal,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrefixScope {
    /// Search every registry journal.
    #[default]
    Registry,
    /// Search only journals covered by the origin database.
    OriginCoverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryNames {
    pub wos_like: String,
    pub sjr_like: String,
}

impl CategoryNames {
    pub fn for_scheme(&self, s: Scheme) -> &str {
        match s {
            Scheme::WosLike => &self.wos_like,
            Scheme::SjrLike => &self.sjr_like,
        }
    }
}

impl Default for CategoryNames {
    fn default() -> Self {
        CategoryNames {
            wos_like: "Nanoscience & Nanotechnology".into(),
            sjr_like: "Nanoscience & Nanotechnology".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DelineationConfig {
    pub cluster_overlap_threshold: f64,
    pub journal_share_threshold: f64,
    pub min_journal_pubs: u64,
    pub min_pubs_basis: MinPubsBasis,
    /// Key into each journal's `per_window_totals`.
    pub window: String,
    pub top_n: usize,
    pub scree_mode: ScreeMode,
    pub nano_pattern: String,
    pub excluded_statuses: BTreeSet<JournalStatus>,
    pub category_names: CategoryNames,
    /// Scheme used by the category approach.
    pub category_scheme: Scheme,
    pub filters: EvalFilters,
    pub pct_basis: PctBasis,
    pub step6_exclude_multidisciplinary: bool,
    pub prefix_scope: PrefixScope,
}

impl Default for DelineationConfig {
    fn default() -> Self {
        DelineationConfig {
            cluster_overlap_threshold: 0.006,
            journal_share_threshold: 0.002,
            min_journal_pubs: 50,
            min_pubs_basis: MinPubsBasis::InCluster,
            window: "2000-2016".into(),
            top_n: 100,
            scree_mode: ScreeMode::VerticalError,
            nano_pattern: "nano*".into(),
            excluded_statuses: [JournalStatus::Ceased, JournalStatus::Discontinued]
                .into_iter()
                .collect(),
            category_names: CategoryNames::default(),
            category_scheme: Scheme::WosLike,
            filters: EvalFilters {
                years: None,
                doc_types: Some([DocType::Article, DocType::Review].into_iter().collect()),
            },
            pct_basis: PctBasis::AfterExclusion,
            step6_exclude_multidisciplinary: true,
            prefix_scope: PrefixScope::Registry,
        }
    }
}

impl DelineationConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        for (name, v) in [
            ("cluster_overlap_threshold", self.cluster_overlap_threshold),
            ("journal_share_threshold", self.journal_share_threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(PipelineError::Config(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        if self.top_n < 3 {
            return Err(PipelineError::Config(format!(
                "top_n = {} must be at least 3",
                self.top_n
            )));
        }
        if self.nano_pattern.trim().is_empty() {
            return Err(PipelineError::Config("nano_pattern is empty".into()));
        }
        Ok(())
    }

    fn active_statuses(&self) -> BTreeSet<JournalStatus> {
        JournalStatus::ALL
            .into_iter()
            .filter(|s| !self.excluded_statuses.contains(s))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepLog {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Origin>,
    pub step: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalEntry {
    pub journal_id: JournalId,
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelineationResult {
    pub approach: Approach,
    /// Sorted by journal id; provenance tags sorted and unique.
    pub journals: Vec<JournalEntry>,
    #[serde(default)]
    pub steps: Vec<StepLog>,
}

impl DelineationResult {
    pub fn from_map(approach: Approach, map: BTreeMap<JournalId, BTreeSet<String>>, steps: Vec<StepLog>) -> Self {
        DelineationResult {
            approach,
            journals: map
                .into_iter()
                .map(|(journal_id, tags)| JournalEntry {
                    journal_id,
                    provenance: tags.into_iter().collect(),
                })
                .collect(),
            steps,
        }
    }

    pub fn with_tag(approach: Approach, ids: impl IntoIterator<Item = JournalId>, tag: &str) -> Self {
        let map = ids
            .into_iter()
            .map(|j| (j, [tag.to_string()].into_iter().collect()))
            .collect();
        Self::from_map(approach, map, Vec::new())
    }

    pub fn journal_set(&self) -> BTreeSet<JournalId> {
        self.journals.iter().map(|e| e.journal_id.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.journals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journals.is_empty()
    }

    pub fn provenance(&self, id: &JournalId) -> Option<&[String]> {
        self.journals
            .iter()
            .find(|e| &e.journal_id == id)
            .map(|e| e.provenance.as_slice())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// CSV `journal_id,canonical_title,provenance` with `;`-joined tags.
    pub fn write_csv<W: Write>(&self, registry: &JournalRegistry, w: W) -> csv::Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(["journal_id", "canonical_title", "provenance"])?;
        for e in &self.journals {
            let title = registry
                .get(&e.journal_id)
                .map(|j| j.canonical_title.as_str())
                .unwrap_or("");
            out.write_record([e.journal_id.as_str(), title, &e.provenance.join(";")])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn run_category_approach(registry: &JournalRegistry, config: &DelineationConfig) -> DelineationResult {
    let scheme = config.category_scheme;
    let ids = registry.journals_in_category(
        scheme,
        config.category_names.for_scheme(scheme),
        &config.excluded_statuses,
    );
    let n = ids.len();
    let mut r = DelineationResult::with_tag(Approach::A1, ids, "category");
    r.steps.push(StepLog {
        origin: None,
        step: format!("category {}", scheme.as_str()),
        count: n,
    });
    r
}

/// Journals of the publications retrieved by a query (the seed set).
pub fn seed_result(pubs: &BTreeSet<PubId>, corpus: &Corpus) -> DelineationResult {
    let ids: BTreeSet<JournalId> = pubs
        .iter()
        .filter_map(|p| corpus.get(p))
        .map(|r| r.journal_id.clone())
        .collect();
    DelineationResult::with_tag(Approach::A0, ids, "seed")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterOverlap {
    pub cluster_id: String,
    pub size: usize,
    pub matched: usize,
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JournalShare {
    pub journal_id: JournalId,
    pub in_cluster: u64,
    pub window_total: u64,
    pub share: f64,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublicationLevelReport {
    pub result: DelineationResult,
    pub kept_clusters: Vec<ClusterOverlap>,
    pub journals: Vec<JournalShare>,
    /// Journals skipped because their window total is missing or zero.
    pub skipped_no_total: Vec<JournalId>,
    /// Publications in kept clusters that the corpus does not hold.
    pub unknown_pubs: usize,
}

pub fn run_publication_level(
    pubs: &BTreeSet<PubId>,
    assignments: &ClusterAssignments,
    corpus: &Corpus,
    config: &DelineationConfig,
) -> Result<PublicationLevelReport, PipelineError> {
    config.validate()?;
    let mut kept = Vec::new();
    for (cid, members) in assignments.clusters() {
        let matched = members.iter().filter(|p| pubs.contains(*p)).count();
        let overlap = matched as f64 / members.len() as f64;
        if matched > 0 && overlap >= config.cluster_overlap_threshold {
            kept.push(ClusterOverlap {
                cluster_id: cid.clone(),
                size: members.len(),
                matched,
                overlap,
            });
        }
    }
    let mut in_cluster: BTreeMap<JournalId, u64> = BTreeMap::new();
    let mut unknown = 0;
    for c in &kept {
        for p in &assignments.clusters()[&c.cluster_id] {
            match corpus.get(p) {
                Some(r) => *in_cluster.entry(r.journal_id.clone()).or_insert(0) += 1,
                None => unknown += 1,
            }
        }
    }
    if unknown > 0 {
        log::warn!("{unknown} clustered publications are missing from the corpus");
    }
    let reg = corpus.registry();
    let mut shares = Vec::new();
    let mut skipped = Vec::new();
    let mut selected = BTreeSet::new();
    for (j, n) in in_cluster {
        let total = reg
            .get(&j)
            .and_then(|r| r.per_window_totals.get(&config.window).copied())
            .unwrap_or(0);
        if total == 0 {
            log::warn!("journal {j} has no publication total for window {}", config.window);
            skipped.push(j);
            continue;
        }
        let share = n as f64 / total as f64;
        let volume = match config.min_pubs_basis {
            MinPubsBasis::InCluster => n,
            MinPubsBasis::WholeJournal => total,
        };
        let ok = share >= config.journal_share_threshold && volume >= config.min_journal_pubs;
        if ok {
            selected.insert(j.clone());
        }
        shares.push(JournalShare {
            journal_id: j,
            in_cluster: n,
            window_total: total,
            share,
            selected: ok,
        });
    }
    let mut result = DelineationResult::with_tag(Approach::A2, selected, "cluster-share");
    result.steps = vec![
        StepLog {
            origin: None,
            step: "clusters kept".into(),
            count: kept.len(),
        },
        StepLog {
            origin: None,
            step: "journals in kept clusters".into(),
            count: shares.len() + skipped.len(),
        },
        StepLog {
            origin: None,
            step: "journals selected".into(),
            count: result.journals.len(),
        },
    ];
    Ok(PublicationLevelReport {
        result,
        kept_clusters: kept,
        journals: shares,
        skipped_no_total: skipped,
        unknown_pubs: unknown,
    })
}

/// One database's corpus and query for the journal-level approach.
#[derive(Clone, Copy)]
pub struct OriginInput<'a> {
    pub origin: Origin,
    pub corpus: &'a Corpus,
    pub query: &'a Query,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OriginTrace {
    pub origin: Origin,
    pub step1_pubs: usize,
    pub step2_tally: CitationTally,
    pub step3_fit: BreakpointFit,
    pub step3_core: BTreeSet<JournalId>,
    pub step4_prefix: BTreeSet<JournalId>,
    pub step5_set: BTreeSet<JournalId>,
    pub step6_pubs: usize,
    pub step6_tally: CitationTally,
    pub step7_fit: Option<BreakpointFit>,
    pub step7_core: BTreeSet<JournalId>,
    pub step7_new: BTreeSet<JournalId>,
    pub selected: BTreeSet<JournalId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JournalLevelReport {
    pub result: DelineationResult,
    pub origins: Vec<OriginTrace>,
}

fn run_origin(
    input: &OriginInput<'_>,
    registry: &JournalRegistry,
    config: &DelineationConfig,
) -> Result<OriginTrace, PipelineError> {
    let origin = input.origin;
    let corpus = input.corpus;
    if corpus.is_empty() {
        return Err(PipelineError::EmptyOrigin(origin));
    }
    let scheme = origin.scheme();
    let step1 = evaluate_docs(input.query, corpus, &config.filters);
    if step1.is_empty() {
        return Err(PipelineError::EmptyOrigin(origin));
    }
    let multi = multidisciplinary_set(registry, scheme);
    let tally2 = tally_docs(&step1, corpus, &multi, config.pct_basis);
    let series3 = top_n(&tally2, config.top_n).map_err(|source| PipelineError::Cite {
        origin,
        step: 3,
        source,
    })?;
    let scree_err = |step| move |source| PipelineError::Scree { origin, step, source };
    let fit3 = fit_breakpoint(&series3, config.scree_mode).map_err(scree_err(3))?;
    let core3 = select_core_set(&series3, &fit3).map_err(scree_err(3))?;

    let mut prefix = title_prefix_search(registry, &config.nano_pattern, &config.active_statuses());
    if config.prefix_scope == PrefixScope::OriginCoverage {
        prefix.retain(|j| registry.get(j).is_some_and(|r| r.covered_in.contains(&origin)));
    }
    let step4: BTreeSet<JournalId> = prefix.difference(&core3).cloned().collect();

    let category = registry.journals_in_category(
        scheme,
        config.category_names.for_scheme(scheme),
        &config.excluded_statuses,
    );
    let step5: BTreeSet<JournalId> = category
        .union(&step4)
        .filter(|j| !core3.contains(*j))
        .cloned()
        .collect();

    let recs = corpus.records();
    let mut step6_docs: Vec<u32> = step5
        .iter()
        .flat_map(|j| corpus.index().by_journal.get(j).into_iter().flatten().copied())
        .filter(|&d| config.filters.admits(recs[d as usize].year, recs[d as usize].doc_type))
        .collect();
    step6_docs.sort_unstable();
    let excl6 = if config.step6_exclude_multidisciplinary {
        multi.clone()
    } else {
        BTreeSet::new()
    };
    let tally6 = tally_docs(&step6_docs, corpus, &excl6, config.pct_basis);
    let (fit7, core7) = if tally6.rows.len().min(config.top_n) >= 3 {
        let series7 = top_n(&tally6, config.top_n).map_err(|source| PipelineError::Cite {
            origin,
            step: 7,
            source,
        })?;
        let fit = fit_breakpoint(&series7, config.scree_mode).map_err(scree_err(7))?;
        let core = select_core_set(&series7, &fit).map_err(scree_err(7))?;
        (Some(fit), core)
    } else {
        log::warn!("{origin}: step 6 tally has {} rows; step 7 skipped", tally6.rows.len());
        (None, BTreeSet::new())
    };
    let step7_new: BTreeSet<JournalId> = core7
        .iter()
        .filter(|j| !core3.contains(*j) && !step4.contains(*j))
        .cloned()
        .collect();
    let selected = core3.iter().chain(&step4).chain(&step7_new).cloned().collect();
    Ok(OriginTrace {
        origin,
        step1_pubs: step1.len(),
        step2_tally: tally2,
        step3_fit: fit3,
        step3_core: core3,
        step4_prefix: step4,
        step5_set: step5,
        step6_pubs: step6_docs.len(),
        step6_tally: tally6,
        step7_fit: fit7,
        step7_core: core7,
        step7_new,
        selected,
    })
}

pub fn run_journal_level(
    inputs: &[OriginInput<'_>],
    registry: &JournalRegistry,
    config: &DelineationConfig,
) -> Result<JournalLevelReport, PipelineError> {
    config.validate()?;
    let traces = inputs
        .par_iter()
        .map(|i| run_origin(i, registry, config))
        .collect::<Result<Vec<_>, _>>()?;
    let mut map: BTreeMap<JournalId, BTreeSet<String>> = BTreeMap::new();
    let mut steps = Vec::new();
    for t in &traces {
        let o = t.origin.as_str();
        let mut tag = |set: &BTreeSet<JournalId>, name: String| {
            for j in set {
                map.entry(j.clone()).or_default().insert(name.clone());
            }
        };
        tag(&t.step3_core, format!("step3-scree:{o}"));
        tag(&t.step4_prefix, "step4-prefix".to_string());
        tag(&t.step7_new, format!("step7-scree:{o}"));
        for (step, count) in [
            ("step1 publications", t.step1_pubs),
            ("step2 cited journals", t.step2_tally.rows.len()),
            ("step3 scree core", t.step3_core.len()),
            ("step4 prefix journals", t.step4_prefix.len()),
            ("step5 journal set", t.step5_set.len()),
            ("step6 publications", t.step6_pubs),
            ("step7 scree core", t.step7_core.len()),
            ("step7 new journals", t.step7_new.len()),
            ("selected", t.selected.len()),
        ] {
            steps.push(StepLog {
                origin: Some(t.origin),
                step: step.into(),
                count,
            });
        }
    }
    steps.push(StepLog {
        origin: None,
        step: "union".into(),
        count: map.len(),
    });
    for s in &steps {
        log::info!(
            "{} {}: {}",
            s.origin.map(|o| o.as_str()).unwrap_or("all"),
            s.step,
            s.count
        );
    }
    Ok(JournalLevelReport {
        result: DelineationResult::from_map(Approach::A3, map, steps),
        origins: traces,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VennReport {
    pub approaches: Vec<Approach>,
    /// Exclusive membership patterns such as "A1∩A3" (in A1 and A3 only).
    pub counts: BTreeMap<String, usize>,
    pub members: BTreeMap<String, Vec<JournalId>>,
    pub total: usize,
    pub per_approach: BTreeMap<Approach, usize>,
}

impl VennReport {
    pub fn count(&self, pattern: &[Approach]) -> usize {
        self.counts.get(&venn_label(pattern)).copied().unwrap_or(0)
    }
}

pub fn venn_label(pattern: &[Approach]) -> String {
    let mut p = pattern.to_vec();
    p.sort();
    p.iter().map(|a| a.as_str()).collect::<Vec<_>>().join("∩")
}

pub fn compare(results: &[&DelineationResult]) -> Result<VennReport, PipelineError> {
    if !(2..=3).contains(&results.len()) {
        return Err(PipelineError::CompareArity(results.len()));
    }
    let mut approaches: Vec<Approach> = Vec::new();
    for r in results {
        if approaches.contains(&r.approach) {
            return Err(PipelineError::DuplicateApproach(r.approach));
        }
        approaches.push(r.approach);
    }
    approaches.sort();
    let mut membership: BTreeMap<JournalId, Vec<Approach>> = BTreeMap::new();
    for r in results {
        for e in &r.journals {
            membership.entry(e.journal_id.clone()).or_default().push(r.approach);
        }
    }
    let mut counts = BTreeMap::new();
    let mut members: BTreeMap<String, Vec<JournalId>> = BTreeMap::new();
    for (j, mut pat) in membership.clone() {
        pat.sort();
        pat.dedup();
        let label = venn_label(&pat);
        *counts.entry(label.clone()).or_insert(0) += 1;
        members.entry(label).or_default().push(j);
    }
    Ok(VennReport {
        per_approach: results.iter().map(|r| (r.approach, r.journal_set().len())).collect(),
        approaches,
        counts,
        members,
        total: membership.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CategoryRef, JournalRecord};

    fn ids(v: &[&str]) -> Vec<JournalId> {
        v.iter().map(|s| JournalId::new(*s)).collect()
    }

    #[test]
    fn venn_basic() {
        let a = DelineationResult::with_tag(Approach::A1, ids(&["x", "y"]), "category");
        let b = DelineationResult::with_tag(Approach::A2, ids(&["x", "y"]), "cluster-share");
        let v = compare(&[&a, &b]).unwrap();
        assert_eq!(v.counts.len(), 1);
        assert_eq!(v.count(&[Approach::A1, Approach::A2]), 2);
        let c = DelineationResult::with_tag(Approach::A3, ids(&["z"]), "scree");
        let v = compare(&[&a, &c]).unwrap();
        assert_eq!(v.count(&[Approach::A1]), 2);
        assert_eq!(v.count(&[Approach::A3]), 1);
        assert_eq!(v.total, 3);
        assert!(matches!(
            compare(&[&a, &a]),
            Err(PipelineError::DuplicateApproach(Approach::A1))
        ));
        assert!(matches!(compare(&[&a]), Err(PipelineError::CompareArity(1))));
    }

    #[test]
    fn category_approach() {
        let mut j = JournalRecord::new("n", "Nano");
        j.categories.push(CategoryRef {
            scheme: Scheme::WosLike,
            name: "Nanoscience & Nanotechnology".into(),
        });
        let mut gone = j.clone();
        gone.journal_id = JournalId::new("g");
        gone.canonical_title = "Gone".into();
        gone.status = JournalStatus::Ceased;
        let reg = JournalRegistry::from_records(vec![j, gone]).unwrap();
        let r = run_category_approach(&reg, &DelineationConfig::default());
        assert_eq!(r.journal_set(), ids(&["n"]).into_iter().collect());
        assert!(run_category_approach(&JournalRegistry::default(), &DelineationConfig::default()).is_empty());
    }

    #[test]
    fn config_validation() {
        let mut c = DelineationConfig::default();
        assert!(c.validate().is_ok());
        c.cluster_overlap_threshold = 1.5;
        assert!(c.validate().is_err());
        let c = DelineationConfig {
            top_n: 2,
            ..DelineationConfig::default()
        };
        assert!(c.validate().is_err());
        let parsed: DelineationConfig = serde_json::from_str(r#"{"cluster_overlap_threshold": 0.6}"#).unwrap();
        assert_eq!(parsed.cluster_overlap_threshold, 0.6);
        assert_eq!(parsed.top_n, 100);
    }
}
