//! TREC qrels and run files.
//!
//! Qrels: `topic_id 0 doc_id grade`. Run: `topic_id Q0 doc_id rank score tag`.
//! Scores are written with the shortest representation that parses back to the
//! same `f64`, so write-read-write is byte-identical.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::merging::MergedList;

/// Deepest ranking accepted per topic in a run.
pub const MAX_RUN_DEPTH: usize = 1000;

/// Highest relevance grade.
pub const MAX_GRADE: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Qrels {
    /// topic → doc → grade in `0..=4`.
    pub judgments: BTreeMap<String, BTreeMap<String, u8>>,
}

impl Qrels {
    pub fn insert(&mut self, topic: &str, doc_id: &str, grade: u8) -> Result<()> {
        if grade > MAX_GRADE {
            return Err(Error::Format {
                line: 0,
                reason: format!("grade {grade} outside 0..={MAX_GRADE}"),
            });
        }
        let topic_map = self.judgments.entry(topic.to_string()).or_default();
        if topic_map.insert(doc_id.to_string(), grade).is_some() {
            return Err(Error::DuplicateJudgment {
                topic: topic.to_string(),
                doc_id: doc_id.to_string(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.judgments.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn parse_qrels(text: &str) -> Result<Qrels> {
    let mut qrels = Qrels::default();
    for (n, line) in text.lines().enumerate() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        let err = |reason: String| Error::Format { line: n + 1, reason };
        let [topic, _, doc_id, grade] = cols[..] else {
            return Err(err(format!("expected 4 columns, found {}", cols.len())));
        };
        let grade: u8 = grade.parse().map_err(|_| err(format!("invalid grade `{grade}`")))?;
        qrels.insert(topic, doc_id, grade).map_err(|e| match e {
            Error::Format { reason, .. } => err(reason),
            other => other,
        })?;
    }
    Ok(qrels)
}

pub fn write_qrels(qrels: &Qrels) -> String {
    let mut out = String::new();
    for (topic, docs) in &qrels.judgments {
        for (doc_id, grade) in docs {
            let _ = writeln!(out, "{topic} 0 {doc_id} {grade}");
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub doc_id: String,
    pub rank: usize,
    pub score: f64,
    pub tag: String,
}

/// Ranked output per topic, each list in rank order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunFile {
    pub topics: BTreeMap<String, Vec<RunEntry>>,
}

impl RunFile {
    pub fn from_merged<'a, I>(lists: I, tag: &str) -> Self
    where
        I: IntoIterator<Item = &'a MergedList>,
    {
        let topics = lists
            .into_iter()
            .map(|m| {
                let entries = m
                    .items
                    .iter()
                    .enumerate()
                    .map(|(i, item)| RunEntry {
                        doc_id: item.doc_id.clone(),
                        rank: i + 1,
                        score: item.final_score,
                        tag: tag.to_string(),
                    })
                    .collect();
                (m.topic_id.clone(), entries)
            })
            .collect();
        Self { topics }
    }

    /// Doc ids of a topic in rank order; empty if the topic is absent.
    pub fn ranking(&self, topic: &str) -> Vec<&str> {
        self.topics
            .get(topic)
            .map(|es| es.iter().map(|e| e.doc_id.as_str()).collect())
            .unwrap_or_default()
    }

    fn validate(&self) -> Result<()> {
        for (topic, entries) in &self.topics {
            let invalid = |reason: String| Error::InvalidRun {
                topic: topic.clone(),
                reason,
            };
            if entries.len() > MAX_RUN_DEPTH {
                return Err(invalid(format!("{} entries, more than {MAX_RUN_DEPTH}", entries.len())));
            }
            let mut seen = HashSet::new();
            for (i, e) in entries.iter().enumerate() {
                if e.rank != i + 1 {
                    return Err(invalid(format!("ranks not contiguous at rank {}", e.rank)));
                }
                if !seen.insert(e.doc_id.as_str()) {
                    return Err(invalid(format!("duplicate document `{}`", e.doc_id)));
                }
                if i > 0 && e.score > entries[i - 1].score {
                    return Err(invalid(format!("score increases at rank {}", e.rank)));
                }
            }
        }
        Ok(())
    }
}

pub fn parse_run(text: &str) -> Result<RunFile> {
    let mut run = RunFile::default();
    for (n, line) in text.lines().enumerate() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        let err = |reason: String| Error::Format { line: n + 1, reason };
        let [topic, _, doc_id, rank, score, tag] = cols[..] else {
            return Err(err(format!("expected 6 columns, found {}", cols.len())));
        };
        let rank: usize = rank.parse().map_err(|_| err(format!("invalid rank `{rank}`")))?;
        let score: f64 = score
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| err(format!("invalid score `{score}`")))?;
        run.topics.entry(topic.to_string()).or_default().push(RunEntry {
            doc_id: doc_id.to_string(),
            rank,
            score,
            tag: tag.to_string(),
        });
    }
    for entries in run.topics.values_mut() {
        entries.sort_by_key(|e| e.rank);
    }
    run.validate()?;
    Ok(run)
}

pub fn write_run(run: &RunFile) -> String {
    let mut out = String::new();
    for (topic, entries) in &run.topics {
        for e in entries {
            let _ = writeln!(out, "{topic} Q0 {} {} {} {}", e.doc_id, e.rank, e.score, e.tag);
        }
    }
    out
}
