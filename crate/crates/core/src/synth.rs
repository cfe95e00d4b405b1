//! Seeded synthetic corpora with a planted set of field journals.
//!
//! The generator plants three kinds of field journal: heavily cited hubs,
//! journals whose titles carry the field prefix, and "late" journals that are
//! cited mostly by non-matching papers published in the prefix journals.
//! Everything else is noise. The hidden truth is the union of the three.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    CategoryRef, ClusterAssignments, Corpus, CorpusError, DocType, JournalId, JournalRecord, JournalRegistry,
    LoadOptions, Origin, PubId, PublicationRecord, Scheme,
};
use crate::lexquery::Dialect;

const FIELD_WORDS: [&str; 6] = [
    "nanoparticles",
    "nanowire",
    "nanostructured",
    "nanotube",
    "nanocomposite",
    "nanoscale",
];
const PLAIN_WORDS: [&str; 10] = [
    "polymer",
    "catalysis",
    "alloy",
    "sensor",
    "protein",
    "membrane",
    "corrosion",
    "laser",
    "ceramic",
    "fluid",
];
const METHOD_WORDS: [&str; 6] = [
    "synthesis",
    "characterization",
    "transport",
    "growth",
    "modelling",
    "assembly",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub seed: u64,
    pub hubs: usize,
    pub prefix_core: usize,
    pub late_core: usize,
    pub noise: usize,
    /// Noise journals that nevertheless carry the field category.
    pub category_noise: usize,
    pub core_pubs_per_origin: usize,
    pub noise_pubs_per_origin: usize,
    pub refs_per_pub: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 7,
            hubs: 8,
            prefix_core: 10,
            late_core: 2,
            noise: 200,
            category_noise: 4,
            core_pubs_per_origin: 60,
            noise_pubs_per_origin: 10,
            refs_per_pub: 15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Hub,
    Prefix,
    Late,
    Noise,
    Mega,
}

pub const CATEGORY: &str = "Nanoscience & Nanotechnology";
pub const WINDOW: &str = "2000-2016";

#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub registry: Arc<JournalRegistry>,
    pub records: Vec<PublicationRecord>,
    pub truth: BTreeSet<JournalId>,
    /// Publications written as field papers (the lexical ground truth).
    pub field_pubs: BTreeSet<PubId>,
    pub clusters: Vec<(PubId, String)>,
}

struct Journal {
    id: JournalId,
    kind: Kind,
}

fn pick<'a>(rng: &mut ChaCha8Rng, words: &[&'a str]) -> &'a str {
    words.choose(rng).copied().unwrap()
}

pub fn generate(cfg: &SynthConfig) -> PlantedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut journals = Vec::new();
    let mut add = |prefix: &str, n: usize, kind: Kind| {
        for i in 1..=n {
            journals.push(Journal {
                id: JournalId::new(format!("{prefix}-{i:03}")),
                kind,
            });
        }
    };
    add("hub", cfg.hubs, Kind::Hub);
    add("pfx", cfg.prefix_core, Kind::Prefix);
    add("late", cfg.late_core, Kind::Late);
    add("noise", cfg.noise, Kind::Noise);
    add("mega", 1, Kind::Mega);

    let of_kind = |k: Kind| -> Vec<usize> { (0..journals.len()).filter(|&i| journals[i].kind == k).collect() };
    let hubs = of_kind(Kind::Hub);
    let prefix = of_kind(Kind::Prefix);
    let late = of_kind(Kind::Late);
    let noise = of_kind(Kind::Noise);
    let mega = of_kind(Kind::Mega)[0];

    // Field papers favour hubs strongly and prefix journals mildly.
    let mut core_targets: Vec<usize> = hubs.clone();
    let mut core_weights: Vec<f64> = (0..hubs.len())
        .map(|i| 10.0 - 3.0 * i as f64 / hubs.len().max(1) as f64)
        .collect();
    for &p in &prefix {
        core_targets.push(p);
        core_weights.push(0.3);
    }
    let core_dist = WeightedIndex::new(&core_weights).unwrap();

    let mut records = Vec::new();
    let mut field_pubs = BTreeSet::new();
    let mut clusters = Vec::new();
    let mut totals: BTreeMap<usize, u64> = BTreeMap::new();
    for origin in [Origin::WosLike, Origin::ScopusLike] {
        let tag = match origin {
            Origin::WosLike => "W",
            Origin::ScopusLike => "S",
        };
        for (ji, j) in journals.iter().enumerate() {
            let (n, p_field) = match j.kind {
                Kind::Hub => (cfg.core_pubs_per_origin, 0.8),
                Kind::Prefix => (cfg.core_pubs_per_origin, 0.5),
                Kind::Late => (cfg.core_pubs_per_origin, 0.1),
                Kind::Noise => (cfg.noise_pubs_per_origin, 0.03),
                Kind::Mega => (cfg.core_pubs_per_origin, 0.05),
            };
            for k in 0..n {
                let field = rng.gen_bool(p_field);
                let pub_id = PubId::new(format!("{tag}{ji:03}{k:03}"));
                let (title, abstract_text, keywords) = if field {
                    let w = pick(&mut rng, &FIELD_WORDS);
                    let m = pick(&mut rng, &METHOD_WORDS);
                    (
                        format!("{m} of {w} for {}", pick(&mut rng, &PLAIN_WORDS)),
                        format!("we report the {m} of {w} with controlled size"),
                        vec![w.to_string()],
                    )
                } else {
                    let w = pick(&mut rng, &PLAIN_WORDS);
                    let m = pick(&mut rng, &METHOD_WORDS);
                    (
                        format!("{m} in {w} systems"),
                        format!("a study of {w} {m} under varied conditions"),
                        vec![w.to_string()],
                    )
                };
                let mut cited = Vec::with_capacity(cfg.refs_per_pub);
                for _ in 0..cfg.refs_per_pub {
                    let u: f64 = rng.gen();
                    let t = if field {
                        if u < 0.72 {
                            core_targets[core_dist.sample(&mut rng)]
                        } else if u < 0.77 {
                            mega
                        } else {
                            noise[rng.gen_range(0..noise.len())]
                        }
                    } else if j.kind == Kind::Prefix && u < 0.85 && !late.is_empty() {
                        late[rng.gen_range(0..late.len())]
                    } else if u < 0.1 && !hubs.is_empty() {
                        hubs[rng.gen_range(0..hubs.len())]
                    } else {
                        noise[rng.gen_range(0..noise.len())]
                    };
                    cited.push(journals[t].id.clone());
                }
                let doc_type = match rng.gen_range(0..100) {
                    0..=89 => DocType::Article,
                    90..=96 => DocType::Review,
                    _ => DocType::Other,
                };
                let cluster = if field {
                    format!("field-{}", ji % 5)
                } else {
                    format!("other-{:02}", ji % 40)
                };
                if field {
                    field_pubs.insert(pub_id.clone());
                }
                clusters.push((pub_id.clone(), cluster));
                *totals.entry(ji).or_insert(0) += 1;
                records.push(PublicationRecord {
                    pub_id,
                    doc_type,
                    year: rng.gen_range(2000..=2016),
                    title,
                    abstract_text,
                    author_keywords: keywords,
                    keywords_plus: Vec::new(),
                    journal_id: j.id.clone(),
                    cited_journal_ids: cited,
                    origin,
                });
            }
        }
    }

    let category_holders: BTreeSet<usize> = hubs
        .iter()
        .take(3)
        .chain(noise.iter().take(cfg.category_noise))
        .copied()
        .collect();
    let mut recs = Vec::new();
    for (ji, j) in journals.iter().enumerate() {
        let n = ji + 1;
        let title = match j.kind {
            Kind::Hub => format!("Journal of Applied Surfaces {n}"),
            Kind::Prefix => format!("Nano Research Letters {n}"),
            Kind::Late => format!("Archive of Colloid Methods {n}"),
            Kind::Noise => format!("Journal of Unrelated Studies {n}"),
            Kind::Mega => "Synthetic Multidisciplinary Reports".to_string(),
        };
        let mut r = JournalRecord::new(j.id.as_str(), &title);
        r.multidisciplinary = j.kind == Kind::Mega;
        if category_holders.contains(&ji) {
            for scheme in [Scheme::WosLike, Scheme::SjrLike] {
                r.categories.push(CategoryRef {
                    scheme,
                    name: CATEGORY.into(),
                });
            }
        }
        r.per_window_totals
            .insert(WINDOW.into(), totals.get(&ji).copied().unwrap_or(0));
        recs.push(r);
    }
    let truth = journals
        .iter()
        .filter(|j| matches!(j.kind, Kind::Hub | Kind::Prefix | Kind::Late))
        .map(|j| j.id.clone())
        .collect();
    PlantedCorpus {
        registry: Arc::new(JournalRegistry::from_records(recs).expect("generated ids are unique")),
        records,
        truth,
        field_pubs,
        clusters,
    }
}

/// A one-term query over the field prefix, in the dialect's own syntax.
pub fn prefix_query(dialect: Dialect) -> String {
    match dialect {
        Dialect::ScopusLike => "#1 TITLE-ABS-KEY(nano*)\nFINAL QUERY #1\n".into(),
        Dialect::WosLike => "#1 TS=(nano*)\nFINAL QUERY #1\n".into(),
    }
}

impl PlantedCorpus {
    pub fn corpus(&self) -> Result<Corpus, CorpusError> {
        Corpus::from_records(self.records.clone(), self.registry.clone(), LoadOptions::default())
    }

    pub fn assignments(&self) -> Result<ClusterAssignments, CorpusError> {
        ClusterAssignments::from_pairs(self.clusters.iter().map(|(p, c)| (p.clone(), c.clone())))
    }

    /// Write `registry.jsonl`, `corpus.jsonl`, `clusters.csv` and one query
    /// file per origin; returns the paths keyed by file stem.
    pub fn write_files(&self, dir: &Path) -> io::Result<BTreeMap<String, PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut out = BTreeMap::new();
        let mut write = |name: &str, body: String| -> io::Result<()> {
            let p = dir.join(name);
            fs::write(&p, body)?;
            out.insert(name.to_string(), p);
            Ok(())
        };
        let mut reg = String::new();
        for r in self.registry.iter() {
            reg.push_str(&serde_json::to_string(r).map_err(io::Error::other)?);
            reg.push('\n');
        }
        write("registry.jsonl", reg)?;
        let mut pubs = String::new();
        for r in &self.records {
            pubs.push_str(&serde_json::to_string(r).map_err(io::Error::other)?);
            pubs.push('\n');
        }
        write("corpus.jsonl", pubs)?;
        let mut cl = String::from("pub_id,cluster_id\n");
        for (p, c) in &self.clusters {
            cl.push_str(&format!("{p},{c}\n"));
        }
        write("clusters.csv", cl)?;
        write("query-scopus-like.txt", prefix_query(Dialect::ScopusLike))?;
        write("query-wos-like.txt", prefix_query(Dialect::WosLike))?;
        Ok(out)
    }
}
