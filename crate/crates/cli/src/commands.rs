use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use fieldscope::breakpoint::{fit_breakpoint, ScreeMode, ScreeSeries};
use fieldscope::corpus::{
    ClusterAssignments, Corpus, CorpusFormat, DocType, JournalId, JournalRegistry, LoadOptions, Origin, PubId,
};
use fieldscope::evalkit::{
    aggregate_votes, approach_precision, ballots_by_approach, fleiss_kappa, load_ballots, precision_by_scope,
    publication_recall, recall_journals, round2, stratum_membership, BallotFile, KappaReport, PublicationRecall,
    RaterMatrix, RaterVote, RelevanceBallot, ScopeRatings,
};
use fieldscope::graphout::{build_journal_graph, export_graph, ExportFormat, GraphOptions};
use fieldscope::lexquery::{evaluate, parse_query, parse_query_file, Dialect, ParseOptions, Query, QueryEnv};
use fieldscope::pipelines::{
    compare, run_category_approach, run_journal_level, run_publication_level, Approach, DelineationResult, OriginInput,
    StepLog, VennReport,
};
use fieldscope::reproduce::{reproduce, FixtureSet};
use serde::Serialize;

use crate::config::{ConfigError, ReportFormat, RunConfig};

/// Where command artifacts go: files under a directory, or stdout.
pub struct Sink {
    pub dir: Option<PathBuf>,
}

impl Sink {
    pub fn emit(&self, name: &str, bytes: &[u8]) -> Result<()> {
        match &self.dir {
            Some(d) => {
                fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
                let p = d.join(name);
                fs::write(&p, bytes).with_context(|| format!("writing {}", p.display()))?;
                log::info!("wrote {}", p.display());
            }
            None => io::stdout().lock().write_all(bytes)?,
        }
        Ok(())
    }

    fn require_dir(&self, command: &str) -> Result<(), ConfigError> {
        if self.dir.is_none() {
            return Err(ConfigError::Invalid(format!(
                "`{command}` writes several files; pass --out or set output_dir"
            )));
        }
        Ok(())
    }
}

pub struct Ctx {
    pub cfg: RunConfig,
    pub sink: Sink,
    pub format: ReportFormat,
}

fn json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("serializable");
    s.push(b'\n');
    s
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

impl Ctx {
    fn registry(&self) -> Result<Arc<JournalRegistry>> {
        let p = RunConfig::require(&self.cfg.registry, "registry")?;
        let reg = JournalRegistry::load(p).with_context(|| format!("loading registry {}", p.display()))?;
        log::info!("registry: {} journals", reg.len());
        Ok(Arc::new(reg))
    }

    fn corpus(&self, registry: Arc<JournalRegistry>) -> Result<Corpus> {
        let p = RunConfig::require(&self.cfg.corpus, "corpus")?;
        let format = match p.extension().and_then(|e| e.to_str()) {
            Some("json") => CorpusFormat::JsonArray,
            _ => CorpusFormat::Jsonl,
        };
        let opts = LoadOptions {
            drop_unresolved_citations: self.cfg.drop_unresolved_citations,
        };
        let c = Corpus::load(p, format, registry, opts).with_context(|| format!("loading corpus {}", p.display()))?;
        log::info!("corpus: {} publications", c.len());
        if c.dropped_citations() > 0 {
            log::warn!("{} citations to unknown journals dropped", c.dropped_citations());
        }
        Ok(c)
    }

    fn query_for(&self, origin: Origin) -> Result<Query> {
        let p = self
            .cfg
            .queries
            .get(&origin)
            .ok_or_else(|| ConfigError::Invalid(format!("no query file configured for {origin}")))?;
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let opts = ParseOptions {
            lenient: self.cfg.lenient_queries,
        };
        let f = parse_query_file(&text, origin.into(), opts).with_context(|| format!("parsing {}", p.display()))?;
        for (label, w) in &f.warnings {
            log::warn!("{}: {label} at offset {}: {}", p.display(), w.offset, w.message);
        }
        let root = f
            .root()
            .ok_or_else(|| anyhow::anyhow!("{}: no query definitions", p.display()))?;
        Ok(root.as_ref().clone())
    }

    fn ratings(&self) -> Result<ScopeRatings> {
        let p = RunConfig::require(&self.cfg.ratings, "ratings")?;
        ScopeRatings::load(p).with_context(|| format!("loading ratings {}", p.display()))
    }

    fn ballot_file(&self) -> Result<BallotFile> {
        let p = RunConfig::require(&self.cfg.ballots, "ballots")?;
        load_ballots(p).with_context(|| format!("loading ballots {}", p.display()))
    }
}

fn load_result(p: &Path) -> Result<DelineationResult> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing result {}", p.display()))
}

fn counter<K: Ord>(it: impl IntoIterator<Item = K>) -> BTreeMap<K, usize> {
    let mut m = BTreeMap::new();
    for k in it {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

#[derive(Serialize)]
struct ClusterSummary {
    clusters: usize,
    assigned: usize,
}

#[derive(Serialize)]
struct IngestSummary {
    journals: usize,
    publications: usize,
    dropped_citations: usize,
    references: usize,
    by_origin: BTreeMap<Origin, usize>,
    by_doc_type: BTreeMap<DocType, usize>,
    years: Option<(i32, i32)>,
    clusters: Option<ClusterSummary>,
}

pub fn ingest(ctx: &Ctx, dump_index: bool) -> Result<()> {
    let reg = ctx.registry()?;
    let corpus = ctx.corpus(reg.clone())?;
    let recs = corpus.records();
    let clusters = match &ctx.cfg.clusters {
        Some(p) => {
            let a = ClusterAssignments::load(p).with_context(|| format!("loading clusters {}", p.display()))?;
            Some(ClusterSummary {
                clusters: a.clusters().len(),
                assigned: a.assigned_count(),
            })
        }
        None => None,
    };
    let s = IngestSummary {
        journals: reg.len(),
        publications: recs.len(),
        dropped_citations: corpus.dropped_citations(),
        references: recs.iter().map(|r| r.cited_journal_ids.len()).sum(),
        by_origin: counter(recs.iter().map(|r| r.origin)),
        by_doc_type: counter(recs.iter().map(|r| r.doc_type)),
        years: recs.iter().map(|r| r.year).min().zip(recs.iter().map(|r| r.year).max()),
        clusters,
    };
    let body = match ctx.format {
        ReportFormat::Json => json(&s),
        ReportFormat::Csv => {
            let mut rows = vec![
                ("journals".to_string(), s.journals),
                ("publications".into(), s.publications),
                ("dropped_citations".into(), s.dropped_citations),
                ("references".into(), s.references),
            ];
            rows.extend(s.by_origin.iter().map(|(o, n)| (format!("origin:{o}"), *n)));
            rows.extend(
                s.by_doc_type
                    .iter()
                    .map(|(d, n)| (format!("doc_type:{d:?}").to_lowercase(), *n)),
            );
            csv_bytes(&["metric", "value"], rows.into_iter().map(|(k, v)| [k, v.to_string()]))?
        }
    };
    ctx.sink.emit(&format!("ingest.{}", ext(ctx.format)), &body)?;
    if dump_index {
        ctx.sink.require_dir("ingest --dump-index")?;
        ctx.sink.emit("index.txt", corpus.index().dump().as_bytes())?;
    }
    Ok(())
}

fn ext(f: ReportFormat) -> &'static str {
    match f {
        ReportFormat::Json => "json",
        ReportFormat::Csv => "csv",
    }
}

#[derive(Serialize)]
struct QueryHits {
    origin: Origin,
    count: usize,
    pub_ids: Vec<PubId>,
}

pub fn query(ctx: &Ctx, origin: Option<Origin>, text: Option<&str>) -> Result<()> {
    let reg = ctx.registry()?;
    let corpus = ctx.corpus(reg)?;
    let origins: Vec<Origin> = match (origin, text) {
        (Some(o), _) => vec![o],
        (None, Some(_)) => bail!(ConfigError::Invalid("--text needs --origin to pick a dialect".into())),
        (None, None) => ctx.cfg.queries.keys().copied().collect(),
    };
    if origins.is_empty() {
        bail!(ConfigError::Invalid(
            "no query files configured and no --text given".into()
        ));
    }
    let mut hits = Vec::new();
    for o in origins {
        let q = match text {
            Some(t) => parse_query(t, Dialect::from(o), &QueryEnv::new()).context("parsing --text")?,
            None => ctx.query_for(o)?,
        };
        let sub = corpus.subset_by_origin(o);
        let found = evaluate(&q, &sub, &ctx.cfg.delineation.filters);
        log::info!("{o}: {} of {} publications match", found.len(), sub.len());
        hits.push(QueryHits {
            origin: o,
            count: found.len(),
            pub_ids: found.into_iter().collect(),
        });
    }
    let body = match ctx.format {
        ReportFormat::Json => json(&hits),
        ReportFormat::Csv => csv_bytes(
            &["origin", "pub_id"],
            hits.iter()
                .flat_map(|h| h.pub_ids.iter().map(|p| [h.origin.as_str().to_string(), p.0.clone()])),
        )?,
    };
    ctx.sink.emit(&format!("query.{}", ext(ctx.format)), &body)
}

fn read_scree_csv(path: &Path) -> Result<ScreeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut rows: Vec<(usize, f64, Option<JournalId>)> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: line {}", path.display(), i + 1))?;
        if !(2..=3).contains(&rec.len()) {
            bail!("{}: line {}: expected rank,value[,journal_id]", path.display(), i + 1);
        }
        let (rank, value) = (rec[0].parse::<usize>(), rec[1].parse::<f64>());
        match (rank, value) {
            (Ok(r), Ok(v)) => rows.push((r, v, rec.get(2).filter(|s| !s.is_empty()).map(JournalId::new))),
            _ if i == 0 => continue,
            _ => bail!("{}: line {}: rank or value is not a number", path.display(), i + 1),
        }
    }
    rows.sort_by_key(|r| r.0);
    for (i, r) in rows.iter().enumerate() {
        if r.0 != i + 1 {
            bail!(
                "{}: ranks must run 1..{} without gaps; found {}",
                path.display(),
                rows.len(),
                r.0
            );
        }
    }
    Ok(ScreeSeries::new(rows.into_iter().map(|(_, v, j)| (v, j)).collect())?)
}

pub fn scree(ctx: &Ctx, input: &Path, mode: ScreeMode) -> Result<()> {
    let series = read_scree_csv(input)?;
    let fit = fit_breakpoint(&series, mode)?;
    log::info!(
        "k = {}: segment 1 slope {} intercept {}, segment 2 slope {} intercept {}",
        fit.k,
        fit.segment1.slope,
        fit.segment1.intercept,
        fit.segment2.slope,
        fit.segment2.intercept
    );
    let body = match ctx.format {
        ReportFormat::Json => json(&fit),
        ReportFormat::Csv => csv_bytes(
            &["k", "sse", "selected"],
            fit.sse_by_k
                .iter()
                .map(|(k, e)| [k.to_string(), format!("{e}"), (*k == fit.k).to_string()]),
        )?,
    };
    ctx.sink.emit(&format!("scree.{}", ext(ctx.format)), &body)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ApproachChoice {
    A1,
    A2,
    A3,
    All,
}

fn steps_csv(steps: &[StepLog]) -> Result<Vec<u8>> {
    csv_bytes(
        &["origin", "step", "count"],
        steps.iter().map(|s| {
            [
                s.origin.map(|o| o.as_str()).unwrap_or("all").to_string(),
                s.step.clone(),
                s.count.to_string(),
            ]
        }),
    )
}

fn write_result(ctx: &Ctx, r: &DelineationResult, reg: &JournalRegistry) -> Result<()> {
    let stem = r.approach.as_str().to_lowercase();
    ctx.sink.emit(&format!("{stem}.json"), r.to_json().as_bytes())?;
    let mut c = Vec::new();
    r.write_csv(reg, &mut c)?;
    ctx.sink.emit(&format!("{stem}.csv"), &c)?;
    ctx.sink.emit(&format!("{stem}-steps.csv"), &steps_csv(&r.steps)?)?;
    log::info!("{} selects {} journals", r.approach, r.len());
    Ok(())
}

/// Step-1 inputs: each configured origin's sub-corpus and query.
fn origin_parts(ctx: &Ctx, corpus: &Corpus) -> Result<Vec<(Origin, Corpus, Query)>> {
    if ctx.cfg.queries.is_empty() {
        bail!(ConfigError::Required {
            what: "query".into(),
            key: "queries",
        });
    }
    ctx.cfg
        .queries
        .keys()
        .map(|&o| Ok((o, corpus.subset_by_origin(o), ctx.query_for(o)?)))
        .collect()
}

pub fn delineate(ctx: &Ctx, choice: ApproachChoice) -> Result<()> {
    ctx.sink.require_dir("delineate")?;
    let dc = &ctx.cfg.delineation;
    let reg = ctx.registry()?;
    let want = |a: ApproachChoice| choice == a || choice == ApproachChoice::All;
    let mut results = Vec::new();
    if want(ApproachChoice::A1) {
        results.push(run_category_approach(&reg, dc));
    }
    if want(ApproachChoice::A2) || want(ApproachChoice::A3) {
        let corpus = ctx.corpus(reg.clone())?;
        let parts = origin_parts(ctx, &corpus)?;
        if want(ApproachChoice::A2) {
            let clusters = RunConfig::require(&ctx.cfg.clusters, "clusters")?;
            let assignments = ClusterAssignments::load(clusters)
                .with_context(|| format!("loading clusters {}", clusters.display()))?;
            let mut seed: BTreeSet<PubId> = BTreeSet::new();
            for (o, sub, q) in &parts {
                let hits = evaluate(q, sub, &dc.filters);
                log::info!("{o} seed publications: {}", hits.len());
                seed.extend(hits);
            }
            let report = run_publication_level(&seed, &assignments, &corpus, dc)?;
            ctx.sink.emit("a2-report.json", &json(&report))?;
            results.push(report.result);
        }
        if want(ApproachChoice::A3) {
            let inputs: Vec<OriginInput<'_>> = parts
                .iter()
                .map(|(origin, corpus, query)| OriginInput {
                    origin: *origin,
                    corpus,
                    query,
                })
                .collect();
            let report = run_journal_level(&inputs, &reg, dc)?;
            ctx.sink.emit("a3-trace.json", &json(&report.origins))?;
            results.push(report.result);
        }
    }
    for r in &results {
        write_result(ctx, r, &reg)?;
    }
    if choice == ApproachChoice::All {
        let v = compare(&results.iter().collect::<Vec<_>>())?;
        log::info!("{} journals across the three approaches", v.total);
        ctx.sink.emit("venn.json", &json(&v))?;
    }
    Ok(())
}

fn venn_csv(v: &VennReport) -> Result<Vec<u8>> {
    csv_bytes(
        &["pattern", "count"],
        v.counts.iter().map(|(k, n)| [k.clone(), n.to_string()]),
    )
}

pub fn compare_cmd(ctx: &Ctx, files: &[PathBuf]) -> Result<()> {
    let results = files.iter().map(|p| load_result(p)).collect::<Result<Vec<_>>>()?;
    let v = compare(&results.iter().collect::<Vec<_>>())?;
    let body = match ctx.format {
        ReportFormat::Json => json(&v),
        ReportFormat::Csv => venn_csv(&v)?,
    };
    ctx.sink.emit(&format!("venn.{}", ext(ctx.format)), &body)
}

#[derive(Serialize)]
struct JournalEval {
    approach: Approach,
    journals: usize,
    high: usize,
    medium: usize,
    low: usize,
    precision: f64,
    recall: Option<f64>,
    precision_2dp: f64,
    recall_2dp: Option<f64>,
}

#[derive(Serialize)]
struct PublicationEval {
    approach: Approach,
    items: usize,
    precision: f64,
    precision_2dp: f64,
}

#[derive(Serialize)]
struct EvaluationReport {
    recall_pool: Option<usize>,
    journal_level: Vec<JournalEval>,
    publication_level: Vec<PublicationEval>,
    publication_recall: Option<PublicationRecall>,
    /// How retrieval by each approach was decided for publication recall.
    membership: &'static str,
}

fn aggregate(file: BallotFile) -> Vec<RelevanceBallot> {
    match file {
        BallotFile::Aggregate(b) => b,
        BallotFile::RaterLevel(v) => aggregate_votes(&v),
    }
}

pub fn evaluate_cmd(ctx: &Ctx, files: &[PathBuf], pool: Option<usize>, threshold: f64) -> Result<()> {
    let results = files.iter().map(|p| load_result(p)).collect::<Result<Vec<_>>>()?;
    let pool = match pool {
        Some(n) => Some(n),
        None if (2..=3).contains(&results.len()) => Some(compare(&results.iter().collect::<Vec<_>>())?.total),
        None => None,
    };
    let mut journal_level = Vec::new();
    if !results.is_empty() {
        let ratings = ctx.ratings()?;
        for r in &results {
            let set = r.journal_set();
            let p = precision_by_scope(&set, &ratings).with_context(|| format!("rating {}", r.approach))?;
            let recall = pool.map(|n| recall_journals(&set, &ratings, n)).transpose()?;
            journal_level.push(JournalEval {
                approach: r.approach,
                journals: set.len(),
                high: p.high,
                medium: p.medium,
                low: p.low,
                precision: p.precision,
                recall,
                precision_2dp: round2(p.precision),
                recall_2dp: recall.map(round2),
            });
        }
    }
    let (mut publication_level, mut rec) = (Vec::new(), None);
    if ctx.cfg.ballots.is_some() {
        let ballots = aggregate(ctx.ballot_file()?);
        for (a, bs) in ballots_by_approach(&ballots) {
            let p = approach_precision(&bs)?;
            publication_level.push(PublicationEval {
                approach: a,
                items: bs.len(),
                precision: p,
                precision_2dp: round2(p),
            });
        }
        rec = Some(publication_recall(&ballots, &stratum_membership(&ballots), threshold)?);
    }
    if journal_level.is_empty() && publication_level.is_empty() {
        bail!(ConfigError::Invalid(
            "nothing to evaluate: pass result files or configure ballots".into()
        ));
    }
    let report = EvaluationReport {
        recall_pool: pool,
        journal_level,
        publication_level,
        publication_recall: rec,
        membership: "stratum",
    };
    let body = match ctx.format {
        ReportFormat::Json => json(&report),
        ReportFormat::Csv => {
            let mut rows: Vec<[String; 4]> = Vec::new();
            for j in &report.journal_level {
                rows.push([
                    j.approach.to_string(),
                    "journal".into(),
                    "precision".into(),
                    j.precision.to_string(),
                ]);
                if let Some(r) = j.recall {
                    rows.push([j.approach.to_string(), "journal".into(), "recall".into(), r.to_string()]);
                }
            }
            for p in &report.publication_level {
                rows.push([
                    p.approach.to_string(),
                    "publication".into(),
                    "precision".into(),
                    p.precision.to_string(),
                ]);
            }
            if let Some(r) = &report.publication_recall {
                for (a, ar) in &r.by_approach {
                    rows.push([
                        a.to_string(),
                        "publication".into(),
                        "recall".into(),
                        ar.recall.to_string(),
                    ]);
                }
            }
            csv_bytes(&["approach", "level", "metric", "value"], rows)?
        }
    };
    ctx.sink.emit(&format!("evaluation.{}", ext(ctx.format)), &body)
}

#[derive(Serialize)]
struct KappaOutput {
    overall: KappaReport,
    by_approach: BTreeMap<Approach, KappaReport>,
    by_field: BTreeMap<String, KappaReport>,
}

fn kappa_of(ballots: &[RelevanceBallot], group: &str) -> Option<KappaReport> {
    match fleiss_kappa(&RaterMatrix::from_ballots(ballots)) {
        Ok(k) => Some(k),
        Err(e) => {
            log::warn!("kappa for {group} skipped: {e}");
            None
        }
    }
}

pub fn kappa(ctx: &Ctx) -> Result<()> {
    let file = ctx.ballot_file()?;
    let mut by_field = BTreeMap::new();
    if let BallotFile::RaterLevel(votes) = &file {
        let mut groups: BTreeMap<&str, Vec<&RaterVote>> = BTreeMap::new();
        for v in votes {
            groups.entry(v.field.as_str()).or_default().push(v);
        }
        for (f, vs) in groups {
            if let Some(k) = kappa_of(&aggregate_votes(vs), f) {
                by_field.insert(f.to_string(), k);
            }
        }
    }
    let ballots = aggregate(file);
    let overall = fleiss_kappa(&RaterMatrix::from_ballots(&ballots))?;
    let by_approach = ballots_by_approach(&ballots)
        .into_iter()
        .filter_map(|(a, bs)| kappa_of(&bs, a.as_str()).map(|k| (a, k)))
        .collect();
    let out = KappaOutput {
        overall,
        by_approach,
        by_field,
    };
    let body = match ctx.format {
        ReportFormat::Json => json(&out),
        ReportFormat::Csv => {
            let row = |g: String, k: &KappaReport| {
                let band = serde_json::to_value(k.band).expect("serializable");
                [
                    g,
                    k.kappa.to_string(),
                    k.observed.to_string(),
                    k.expected.to_string(),
                    band.as_str().unwrap_or_default().to_string(),
                    k.degenerate.to_string(),
                ]
            };
            let mut rows = vec![row("overall".into(), &out.overall)];
            rows.extend(out.by_approach.iter().map(|(a, k)| row(format!("approach:{a}"), k)));
            rows.extend(out.by_field.iter().map(|(f, k)| row(format!("field:{f}"), k)));
            csv_bytes(&["group", "kappa", "observed", "expected", "band", "degenerate"], rows)?
        }
    };
    ctx.sink.emit(&format!("kappa.{}", ext(ctx.format)), &body)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    PairwiseEdgeList,
    LabeledNetwork,
}

pub struct GraphArgs<'a> {
    pub graph_format: GraphFormat,
    pub directed: bool,
    pub self_loops: bool,
    pub universe: &'a [PathBuf],
    pub overlays: &'a [PathBuf],
}

pub fn export_graph_cmd(ctx: &Ctx, args: GraphArgs<'_>) -> Result<()> {
    let reg = ctx.registry()?;
    let corpus = ctx.corpus(reg.clone())?;
    let universe: BTreeSet<JournalId> = if args.universe.is_empty() {
        reg.iter().map(|j| j.journal_id.clone()).collect()
    } else {
        let mut u = BTreeSet::new();
        for p in args.universe {
            u.extend(load_result(p)?.journal_set());
        }
        u
    };
    let filters = &ctx.cfg.delineation.filters;
    let pubs: BTreeSet<PubId> = corpus
        .records()
        .iter()
        .filter(|r| filters.admits(r.year, r.doc_type))
        .map(|r| r.pub_id.clone())
        .collect();
    let mut g = build_journal_graph(
        &pubs,
        &corpus,
        &universe,
        GraphOptions {
            self_loops: args.self_loops,
        },
    )?;
    for p in args.overlays {
        let r = load_result(p)?;
        let journals = r.journal_set();
        let members: Vec<&PubId> = corpus
            .records()
            .iter()
            .filter(|x| journals.contains(&x.journal_id) && pubs.contains(&x.pub_id))
            .map(|x| &x.pub_id)
            .collect();
        g.add_overlay(r.approach, members, &corpus);
    }
    log::info!("graph: {} nodes, total weight {}", g.nodes.len(), g.total_weight());
    let (format, name) = match args.graph_format {
        GraphFormat::PairwiseEdgeList => (ExportFormat::PairwiseEdgeList, "graph.tsv"),
        GraphFormat::LabeledNetwork => (ExportFormat::LabeledNetwork, "graph.csv"),
    };
    let mut body = Vec::new();
    export_graph(&g, format, args.directed, &mut body)?;
    ctx.sink.emit(name, &body)
}

/// Returns whether every check passed.
pub fn reproduce_cmd(ctx: &Ctx, fixtures: Option<&Path>) -> Result<bool> {
    let fx = match fixtures {
        Some(d) => FixtureSet::from_dir(d)?,
        None => FixtureSet::bundled(),
    };
    let report = reproduce(&fx)?;
    match ctx.format {
        ReportFormat::Json => ctx.sink.emit("reproduce.json", report.to_json().as_bytes())?,
        ReportFormat::Csv => {
            let body = csv_bytes(
                &["check", "expected", "computed", "tolerance", "pass"],
                report.checks.iter().map(|c| {
                    [
                        c.name.clone(),
                        c.expected.to_string(),
                        c.computed.to_string(),
                        c.tolerance.to_string(),
                        c.pass.to_string(),
                    ]
                }),
            )?;
            ctx.sink.emit("reproduce.csv", &body)?;
        }
    }
    if ctx.sink.dir.is_some() {
        eprint!("{}", report.render_text());
    }
    if !report.passed() {
        eprint!("fixture drift:\n{}", report.diff());
    }
    Ok(report.passed())
}
