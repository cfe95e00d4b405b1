//! Bibliographic corpus: the journal registry, publication records, the
//! per-field token index and micro-cluster assignments.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: field `{field}`: {message}")]
    Malformed {
        line: usize,
        field: String,
        message: String,
    },
    #[error("line {line}: unknown journal `{id}` in field `{field}`")]
    UnknownJournal { line: usize, field: String, id: String },
    #[error("line {line}: duplicate pub_id `{id}`")]
    DuplicatePub { line: usize, id: String },
    #[error("duplicate journal_id `{0}`")]
    DuplicateJournal(String),
    #[error("name `{name}` maps to both `{first}` and `{second}`")]
    AliasCollision {
        name: String,
        first: String,
        second: String,
    },
    #[error("cluster file line {line}: pub `{pub_id}` already assigned to `{cluster}`")]
    ClusterConflict {
        line: usize,
        pub_id: String,
        cluster: String,
    },
    #[error("cluster file line {line}: {message}")]
    ClusterCsv { line: usize, message: String },
}

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PubId(pub String);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JournalId(pub String);

impl PubId {
    pub fn new(s: impl Into<String>) -> Self {
        PubId(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl JournalId {
    pub fn new(s: impl Into<String>) -> Self {
        JournalId(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PubId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for JournalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocType {
    Article,
    Review,
    Other,
}

/// Which bibliographic database a record (or a query dialect) imitates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Origin {
    #[serde(rename = "scopus-like")]
    ScopusLike,
    #[serde(rename = "wos-like")]
    WosLike,
}

impl Origin {
    pub const ALL: [Origin; 2] = [Origin::ScopusLike, Origin::WosLike];

    pub fn as_str(self) -> &'static str {
        match self {
            Origin::ScopusLike => "scopus-like",
            Origin::WosLike => "wos-like",
        }
    }

    /// Category scheme used by the journal rankings paired with this database.
    pub fn scheme(self) -> Scheme {
        match self {
            Origin::ScopusLike => Scheme::SjrLike,
            Origin::WosLike => Scheme::WosLike,
        }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JournalStatus {
    #[default]
    Active,
    Ceased,
    Discontinued,
}

impl JournalStatus {
    pub const ALL: [JournalStatus; 3] = [
        JournalStatus::Active,
        JournalStatus::Ceased,
        JournalStatus::Discontinued,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "wos-like")]
    WosLike,
    #[serde(rename = "sjr-like")]
    SjrLike,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::WosLike => "wos-like",
            Scheme::SjrLike => "sjr-like",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CategoryRef {
    pub scheme: Scheme,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JournalRecord {
    pub journal_id: JournalId,
    pub canonical_title: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    #[serde(default)]
    pub issns: Vec<String>,
    #[serde(default)]
    pub status: JournalStatus,
    #[serde(default)]
    pub categories: Vec<CategoryRef>,
    #[serde(default)]
    pub multidisciplinary: bool,
    #[serde(default)]
    pub covered_in: BTreeSet<Origin>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_window_totals: BTreeMap<String, u64>,
    /// Free-text audit trail (where the record was transcribed from).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl JournalRecord {
    pub fn new(id: &str, title: &str) -> Self {
        JournalRecord {
            journal_id: JournalId::new(id),
            canonical_title: title.to_string(),
            aliases: Vec::new(),
            issns: Vec::new(),
            status: JournalStatus::Active,
            categories: Vec::new(),
            multidisciplinary: false,
            covered_in: Origin::ALL.into_iter().collect(),
            per_window_totals: BTreeMap::new(),
            note: None,
        }
    }

    pub fn in_category(&self, scheme: Scheme, name: &str) -> bool {
        let want = normalize_title(name);
        self.categories
            .iter()
            .any(|c| c.scheme == scheme && normalize_title(&c.name) == want)
    }

    /// Canonical title followed by every alias.
    pub fn titles(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.canonical_title.as_str()).chain(self.aliases.iter().map(String::as_str))
    }
}

/// Journal title key: case-folded, `&` read as "and", subtitle after an
/// em or en dash dropped, punctuation stripped, whitespace collapsed.
pub fn normalize_title(s: &str) -> String {
    let head = s.split(['\u{2014}', '\u{2013}']).next().unwrap_or("");
    let mut out = String::with_capacity(head.len());
    for word in head
        .replace('&', " and ")
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
    {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

fn normalize_issn(s: &str) -> Option<String> {
    let compact: String = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '-')
        .collect::<String>()
        .to_uppercase();
    let ok = compact.len() == 8
        && compact[..7].chars().all(|c| c.is_ascii_digit())
        && compact[7..].chars().all(|c| c.is_ascii_digit() || c == 'X');
    ok.then(|| format!("{}-{}", &compact[..4], &compact[4..]))
}

/// Tokens of free text: alphanumeric runs, lower-cased.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Tokens of a journal title. Like [`tokenize`] but styled names such as
/// "ChemNanoMat" are also split at lower-to-upper case transitions.
pub fn tokenize_title(title: &str) -> Vec<String> {
    let mut out = Vec::new();
    for run in title.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()) {
        let mut cur = String::new();
        let mut prev_lower = false;
        for c in run.chars() {
            if c.is_uppercase() && prev_lower && !cur.is_empty() {
                out.push(cur.to_lowercase());
                cur.clear();
            }
            prev_lower = c.is_lowercase();
            cur.push(c);
        }
        if !cur.is_empty() {
            out.push(cur.to_lowercase());
        }
    }
    out
}

#[derive(Debug, Default, Clone)]
pub struct JournalRegistry {
    journals: Vec<JournalRecord>,
    by_id: HashMap<JournalId, usize>,
    by_title: HashMap<String, usize>,
    by_issn: HashMap<String, usize>,
}

impl JournalRegistry {
    pub fn from_records(mut records: Vec<JournalRecord>) -> Result<Self, CorpusError> {
        records.sort_by(|a, b| a.journal_id.cmp(&b.journal_id));
        let mut reg = JournalRegistry::default();
        for (idx, rec) in records.iter().enumerate() {
            if reg.by_id.insert(rec.journal_id.clone(), idx).is_some() {
                return Err(CorpusError::DuplicateJournal(rec.journal_id.0.clone()));
            }
        }
        for (idx, rec) in records.iter().enumerate() {
            for title in rec.titles() {
                let key = normalize_title(title);
                if key.is_empty() {
                    continue;
                }
                if let Some(&other) = reg.by_title.get(&key) {
                    if other != idx {
                        return Err(CorpusError::AliasCollision {
                            name: title.to_string(),
                            first: records[other].journal_id.0.clone(),
                            second: rec.journal_id.0.clone(),
                        });
                    }
                }
                reg.by_title.insert(key, idx);
            }
            for issn in &rec.issns {
                let key = normalize_issn(issn).unwrap_or_else(|| issn.trim().to_uppercase());
                if let Some(&other) = reg.by_issn.get(&key) {
                    if other != idx {
                        return Err(CorpusError::AliasCollision {
                            name: issn.clone(),
                            first: records[other].journal_id.0.clone(),
                            second: rec.journal_id.0.clone(),
                        });
                    }
                }
                reg.by_issn.insert(key, idx);
            }
        }
        reg.journals = records;
        Ok(reg)
    }

    pub fn from_jsonl_str(text: &str) -> Result<Self, CorpusError> {
        let records = parse_jsonl::<JournalRecord>(text)?;
        Self::from_records(records)
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::from_jsonl_str(&text)
    }

    pub fn len(&self) -> usize {
        self.journals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journals.is_empty()
    }

    /// Records in journal_id order.
    pub fn iter(&self) -> impl Iterator<Item = &JournalRecord> {
        self.journals.iter()
    }

    pub fn get(&self, id: &JournalId) -> Option<&JournalRecord> {
        self.by_id.get(id).map(|&i| &self.journals[i])
    }

    pub fn contains(&self, id: &JournalId) -> bool {
        self.by_id.contains_key(id)
    }

    /// Dense position of a journal in id order.
    pub fn index_of(&self, id: &JournalId) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn by_index(&self, idx: usize) -> &JournalRecord {
        &self.journals[idx]
    }

    /// Look a journal up by ISSN, title or alias.
    pub fn resolve(&self, name_or_issn: &str) -> Option<&JournalRecord> {
        if let Some(issn) = normalize_issn(name_or_issn) {
            if let Some(&i) = self.by_issn.get(&issn) {
                return Some(&self.journals[i]);
            }
        }
        self.by_title
            .get(&normalize_title(name_or_issn))
            .map(|&i| &self.journals[i])
    }

    /// Exact id first, then [`JournalRegistry::resolve`].
    pub fn resolve_reference(&self, reference: &str) -> Option<&JournalRecord> {
        self.get(&JournalId::new(reference)).or_else(|| self.resolve(reference))
    }

    pub fn journals_in_category(
        &self,
        scheme: Scheme,
        category: &str,
        exclude_statuses: &BTreeSet<JournalStatus>,
    ) -> BTreeSet<JournalId> {
        let members: Vec<&JournalRecord> = self
            .journals
            .iter()
            .filter(|j| j.in_category(scheme, category))
            .collect();
        if members.is_empty() {
            log::warn!("no journal carries category {} / {category:?}", scheme.as_str());
        }
        members
            .into_iter()
            .filter(|j| !exclude_statuses.contains(&j.status))
            .map(|j| j.journal_id.clone())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PublicationRecord {
    pub pub_id: PubId,
    pub doc_type: DocType,
    pub year: i32,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    #[serde(default)]
    pub author_keywords: Vec<String>,
    #[serde(default)]
    pub keywords_plus: Vec<String>,
    pub journal_id: JournalId,
    #[serde(default)]
    pub cited_journal_ids: Vec<JournalId>,
    pub origin: Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchField {
    Title,
    Abstract,
    AuthorKeywords,
    KeywordsPlus,
}

impl SearchField {
    pub const ALL: [SearchField; 4] = [
        SearchField::Title,
        SearchField::Abstract,
        SearchField::AuthorKeywords,
        SearchField::KeywordsPlus,
    ];

    pub fn slot(self) -> usize {
        self as usize
    }
}

impl PublicationRecord {
    pub fn field_values(&self, field: SearchField) -> Vec<&str> {
        match field {
            SearchField::Title => vec![self.title.as_str()],
            SearchField::Abstract => vec![self.abstract_text.as_str()],
            SearchField::AuthorKeywords => self.author_keywords.iter().map(String::as_str).collect(),
            SearchField::KeywordsPlus => self.keywords_plus.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Posting {
    pub doc: u32,
    pub value: u32,
    pub pos: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FieldIndex {
    pub tokens: BTreeMap<String, Vec<Posting>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusIndex {
    pub fields: [FieldIndex; 4],
    /// Document positions per source journal.
    pub by_journal: BTreeMap<JournalId, Vec<u32>>,
}

impl CorpusIndex {
    fn build(pubs: &[PublicationRecord]) -> Self {
        let mut index = CorpusIndex::default();
        for (doc, rec) in pubs.iter().enumerate() {
            let doc = doc as u32;
            for field in SearchField::ALL {
                let slot = &mut index.fields[field.slot()].tokens;
                for (v, value) in rec.field_values(field).into_iter().enumerate() {
                    for (pos, tok) in tokenize(value).into_iter().enumerate() {
                        slot.entry(tok).or_default().push(Posting {
                            doc,
                            value: v as u32,
                            pos: pos as u32,
                        });
                    }
                }
            }
            index.by_journal.entry(rec.journal_id.clone()).or_default().push(doc);
        }
        index
    }

    pub fn field(&self, field: SearchField) -> &FieldIndex {
        &self.fields[field.slot()]
    }

    /// Stable text dump used to compare rebuilt indexes.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for field in SearchField::ALL {
            for (tok, postings) in &self.field(field).tokens {
                out.push_str(&format!("{field:?}\t{tok}"));
                for p in postings {
                    out.push_str(&format!(" {}:{}:{}", p.doc, p.value, p.pos));
                }
                out.push('\n');
            }
        }
        for (j, docs) in &self.by_journal {
            out.push_str(&format!("journal\t{j}\t{docs:?}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorpusFormat {
    /// One JSON object per line.
    #[default]
    Jsonl,
    /// A single JSON array of objects.
    JsonArray,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Drop cited journals missing from the registry instead of failing.
    pub drop_unresolved_citations: bool,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    registry: Arc<JournalRegistry>,
    pubs: Vec<PublicationRecord>,
    by_id: HashMap<PubId, u32>,
    journal_idx: Vec<u32>,
    cited_idx: Vec<Vec<u32>>,
    index: CorpusIndex,
    dropped_citations: usize,
}

fn parse_jsonl<T: serde::de::DeserializeOwned>(text: &str) -> Result<Vec<T>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_record(line, i + 1)?);
    }
    Ok(out)
}

fn parse_record<T: serde::de::DeserializeOwned>(line: &str, lineno: usize) -> Result<T, CorpusError> {
    let mut de = serde_json::Deserializer::from_str(line);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        CorpusError::Malformed {
            line: lineno,
            field: if path == "." { "<record>".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })
}

impl Corpus {
    pub fn from_records(
        records: Vec<PublicationRecord>,
        registry: Arc<JournalRegistry>,
        opts: LoadOptions,
    ) -> Result<Self, CorpusError> {
        Self::build(
            records.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect(),
            registry,
            opts,
        )
    }

    fn build(
        numbered: Vec<(usize, PublicationRecord)>,
        registry: Arc<JournalRegistry>,
        opts: LoadOptions,
    ) -> Result<Self, CorpusError> {
        let mut seen: HashMap<PubId, usize> = HashMap::new();
        let mut dropped = 0usize;
        let mut pubs = Vec::with_capacity(numbered.len());
        for (line, mut rec) in numbered {
            if seen.insert(rec.pub_id.clone(), line).is_some() {
                return Err(CorpusError::DuplicatePub { line, id: rec.pub_id.0 });
            }
            rec.journal_id = match registry.resolve_reference(rec.journal_id.as_str()) {
                Some(j) => j.journal_id.clone(),
                None => {
                    return Err(CorpusError::UnknownJournal {
                        line,
                        field: "journal_id".into(),
                        id: rec.journal_id.0,
                    })
                }
            };
            let mut cited = Vec::with_capacity(rec.cited_journal_ids.len());
            for c in rec.cited_journal_ids.drain(..) {
                match registry.resolve_reference(c.as_str()) {
                    Some(j) => cited.push(j.journal_id.clone()),
                    None if opts.drop_unresolved_citations => dropped += 1,
                    None => {
                        return Err(CorpusError::UnknownJournal {
                            line,
                            field: "cited_journal_ids".into(),
                            id: c.0,
                        })
                    }
                }
            }
            rec.cited_journal_ids = cited;
            pubs.push(rec);
        }
        if dropped > 0 {
            log::warn!("dropped {dropped} citations to journals outside the registry");
        }
        pubs.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
        let by_id = pubs
            .iter()
            .enumerate()
            .map(|(i, p)| (p.pub_id.clone(), i as u32))
            .collect();
        let journal_idx = pubs
            .iter()
            .map(|p| registry.index_of(&p.journal_id).unwrap() as u32)
            .collect();
        let cited_idx = pubs
            .iter()
            .map(|p| {
                p.cited_journal_ids
                    .iter()
                    .map(|c| registry.index_of(c).unwrap() as u32)
                    .collect()
            })
            .collect();
        let index = CorpusIndex::build(&pubs);
        Ok(Corpus {
            registry,
            pubs,
            by_id,
            journal_idx,
            cited_idx,
            index,
            dropped_citations: dropped,
        })
    }

    pub fn from_str(
        text: &str,
        format: CorpusFormat,
        registry: Arc<JournalRegistry>,
        opts: LoadOptions,
    ) -> Result<Self, CorpusError> {
        let numbered = match format {
            CorpusFormat::Jsonl => {
                let mut v = Vec::new();
                for (i, line) in text.lines().enumerate() {
                    if !line.trim().is_empty() {
                        v.push((i + 1, parse_record(line, i + 1)?));
                    }
                }
                v
            }
            CorpusFormat::JsonArray => {
                let values: Vec<serde_json::Value> =
                    serde_json::from_str(text).map_err(|e| CorpusError::Malformed {
                        line: e.line(),
                        field: "<array>".into(),
                        message: e.to_string(),
                    })?;
                let mut v = Vec::new();
                for (i, value) in values.into_iter().enumerate() {
                    let rec = serde_path_to_error::deserialize(value).map_err(|e| CorpusError::Malformed {
                        line: i + 1,
                        field: e.path().to_string(),
                        message: e.into_inner().to_string(),
                    })?;
                    v.push((i + 1, rec));
                }
                v
            }
        };
        Self::build(numbered, registry, opts)
    }

    pub fn load(
        path: &Path,
        format: CorpusFormat,
        registry: Arc<JournalRegistry>,
        opts: LoadOptions,
    ) -> Result<Self, CorpusError> {
        let mut text = String::new();
        fs::File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| io_err(path, e))?;
        Self::from_str(&text, format, registry, opts)
    }

    pub fn registry(&self) -> &JournalRegistry {
        &self.registry
    }

    pub fn registry_arc(&self) -> Arc<JournalRegistry> {
        Arc::clone(&self.registry)
    }

    pub fn len(&self) -> usize {
        self.pubs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pubs.is_empty()
    }

    /// Records in pub_id order; positions here are the index's doc numbers.
    pub fn records(&self) -> &[PublicationRecord] {
        &self.pubs
    }

    pub fn get(&self, id: &PubId) -> Option<&PublicationRecord> {
        self.by_id.get(id).map(|&i| &self.pubs[i as usize])
    }

    pub fn position(&self, id: &PubId) -> Option<u32> {
        self.by_id.get(id).copied()
    }

    pub fn index(&self) -> &CorpusIndex {
        &self.index
    }

    pub fn dropped_citations(&self) -> usize {
        self.dropped_citations
    }

    pub(crate) fn journal_index_of_doc(&self, doc: u32) -> u32 {
        self.journal_idx[doc as usize]
    }

    pub(crate) fn cited_indices_of_doc(&self, doc: u32) -> &[u32] {
        &self.cited_idx[doc as usize]
    }

    /// Publications whose source journal is `journal`.
    pub fn pubs_in_journal(&self, journal: &JournalId) -> impl Iterator<Item = &PublicationRecord> {
        self.index
            .by_journal
            .get(journal)
            .into_iter()
            .flatten()
            .map(|&d| &self.pubs[d as usize])
    }

    /// New corpus holding only the records from one database.
    pub fn subset_by_origin(&self, origin: Origin) -> Corpus {
        let records = self.pubs.iter().filter(|p| p.origin == origin).cloned().collect();
        let mut c = Corpus::from_records(records, self.registry_arc(), LoadOptions::default())
            .expect("records already validated");
        c.dropped_citations = 0;
        c
    }

    pub fn origins(&self) -> BTreeSet<Origin> {
        self.pubs.iter().map(|p| p.origin).collect()
    }
}

/// Micro-cluster partition of publications.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClusterAssignments {
    pub_to_cluster: BTreeMap<PubId, String>,
    members: BTreeMap<String, Vec<PubId>>,
}

impl ClusterAssignments {
    pub fn from_pairs<I>(pairs: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = (PubId, String)>,
    {
        let mut out = ClusterAssignments::default();
        for (i, (p, c)) in pairs.into_iter().enumerate() {
            out.insert(i + 1, p, c)?;
        }
        out.finish();
        Ok(out)
    }

    fn insert(&mut self, line: usize, p: PubId, c: String) -> Result<(), CorpusError> {
        if let Some(prev) = self.pub_to_cluster.get(&p) {
            if *prev == c {
                return Ok(());
            }
            return Err(CorpusError::ClusterConflict {
                line,
                pub_id: p.0,
                cluster: prev.clone(),
            });
        }
        self.members.entry(c.clone()).or_default().push(p.clone());
        self.pub_to_cluster.insert(p, c);
        Ok(())
    }

    fn finish(&mut self) {
        for v in self.members.values_mut() {
            v.sort();
        }
    }

    /// Two-column CSV `pub_id,cluster_id` with a header row.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self, CorpusError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut out = ClusterAssignments::default();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| CorpusError::ClusterCsv {
                line,
                message: e.to_string(),
            })?;
            if row.len() != 2 {
                return Err(CorpusError::ClusterCsv {
                    line,
                    message: format!("expected 2 columns, found {}", row.len()),
                });
            }
            out.insert(line, PubId::new(&row[0]), row[1].to_string())?;
        }
        out.finish();
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let f = fs::File::open(path).map_err(|e| io_err(path, e))?;
        Self::from_csv_reader(f)
    }

    pub fn cluster_of(&self, p: &PubId) -> Option<&str> {
        self.pub_to_cluster.get(p).map(String::as_str)
    }

    pub fn clusters(&self) -> &BTreeMap<String, Vec<PubId>> {
        &self.members
    }

    pub fn assigned_count(&self) -> usize {
        self.pub_to_cluster.len()
    }
}
