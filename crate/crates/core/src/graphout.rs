//! Journal citation network with per-approach publication overlays.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, JournalId, PubId};
use crate::pipelines::Approach;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("node universe is empty")]
    EmptyUniverse,
    #[error("journal `{0}` is not in the registry")]
    UnknownJournal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeAttrs {
    pub label: String,
    pub citations: u64,
    pub pubs_by_approach: BTreeMap<Approach, u64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GraphOptions {
    pub self_loops: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JournalGraph {
    pub nodes: BTreeMap<JournalId, NodeAttrs>,
    /// (citing journal, cited journal) -> references.
    pub directed: BTreeMap<(JournalId, JournalId), u64>,
}

impl JournalGraph {
    /// Symmetric weights keyed by the ordered pair (smaller id first).
    pub fn undirected(&self) -> BTreeMap<(JournalId, JournalId), u64> {
        let mut out = BTreeMap::new();
        for ((a, b), w) in &self.directed {
            let key = if a <= b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            };
            *out.entry(key).or_insert(0) += w;
        }
        out
    }

    pub fn total_weight(&self) -> u64 {
        self.directed.values().sum()
    }

    /// Count, for one approach, the given publications per universe journal.
    pub fn add_overlay<'a>(&mut self, approach: Approach, pubs: impl IntoIterator<Item = &'a PubId>, corpus: &Corpus) {
        for n in self.nodes.values_mut() {
            n.pubs_by_approach.insert(approach, 0);
        }
        for p in pubs {
            if let Some(r) = corpus.get(p) {
                if let Some(n) = self.nodes.get_mut(&r.journal_id) {
                    *n.pubs_by_approach.get_mut(&approach).unwrap() += 1;
                }
            }
        }
    }
}

pub fn build_journal_graph(
    pubs: &BTreeSet<PubId>,
    corpus: &Corpus,
    universe: &BTreeSet<JournalId>,
    opts: GraphOptions,
) -> Result<JournalGraph, GraphError> {
    if universe.is_empty() {
        return Err(GraphError::EmptyUniverse);
    }
    let reg = corpus.registry();
    let mut in_universe = vec![false; reg.len()];
    for j in universe {
        let idx = reg.index_of(j).ok_or_else(|| GraphError::UnknownJournal(j.0.clone()))?;
        in_universe[idx] = true;
    }
    let docs: Vec<u32> = pubs.iter().filter_map(|p| corpus.position(p)).collect();
    let counts: HashMap<(u32, u32), u64> = docs
        .par_iter()
        .fold(HashMap::new, |mut m, &d| {
            let src = corpus.journal_index_of_doc(d);
            if in_universe[src as usize] {
                for &t in corpus.cited_indices_of_doc(d) {
                    if in_universe[t as usize] && (opts.self_loops || t != src) {
                        *m.entry((src, t)).or_insert(0) += 1;
                    }
                }
            }
            m
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let mut nodes: BTreeMap<JournalId, NodeAttrs> = universe
        .iter()
        .map(|j| {
            (
                j.clone(),
                NodeAttrs {
                    label: reg.get(j).map(|r| r.canonical_title.clone()).unwrap_or_default(),
                    citations: 0,
                    pubs_by_approach: BTreeMap::new(),
                },
            )
        })
        .collect();
    let mut directed = BTreeMap::new();
    for ((s, t), w) in counts {
        let s = reg.by_index(s as usize).journal_id.clone();
        let t = reg.by_index(t as usize).journal_id.clone();
        nodes.get_mut(&t).unwrap().citations += w;
        directed.insert((s, t), w);
    }
    Ok(JournalGraph { nodes, directed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// TSV `source_id<TAB>target_id<TAB>weight`.
    PairwiseEdgeList,
    /// `*nodes` CSV block followed by an `*edges` CSV block.
    LabeledNetwork,
}

const OVERLAYS: [Approach; 3] = [Approach::A1, Approach::A2, Approach::A3];

pub fn export_graph<W: Write>(graph: &JournalGraph, format: ExportFormat, directed: bool, mut w: W) -> io::Result<()> {
    let edges = if directed {
        graph.directed.clone()
    } else {
        graph.undirected()
    };
    match format {
        ExportFormat::PairwiseEdgeList => {
            for ((a, b), wt) in &edges {
                writeln!(w, "{a}\t{b}\t{wt}")?;
            }
        }
        ExportFormat::LabeledNetwork => {
            writeln!(w, "*nodes")?;
            let mut nodes = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut w);
            nodes.write_record(["id", "label", "citations", "a1_pubs", "a2_pubs", "a3_pubs"])?;
            for (id, n) in &graph.nodes {
                let mut row = vec![id.0.clone(), n.label.clone(), n.citations.to_string()];
                for a in OVERLAYS {
                    row.push(n.pubs_by_approach.get(&a).copied().unwrap_or(0).to_string());
                }
                nodes.write_record(&row)?;
            }
            nodes.flush()?;
            drop(nodes);
            writeln!(w, "*edges")?;
            let mut out = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut w);
            out.write_record(["source", "target", "weight"])?;
            for ((a, b), wt) in &edges {
                out.write_record([a.as_str(), b.as_str(), &wt.to_string()])?;
            }
            out.flush()?;
        }
    }
    Ok(())
}
