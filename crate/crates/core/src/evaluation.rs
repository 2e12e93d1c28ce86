//! Bpref, average precision and precision at k over binarized judgments,
//! macro-averaged across topics.
//!
//! Grades 1-4 count as relevant and grade 0 as non-relevant. Documents without
//! a judgment are ignored by Bpref and treated as non-relevant elsewhere.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trec::{Qrels, RunFile};

/// Binary judgments of one topic: doc → relevant?
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct JudgedTopic {
    pub topic_id: String,
    pub judgments: BTreeMap<String, bool>,
}

impl JudgedTopic {
    pub fn relevant_count(&self) -> usize {
        self.judgments.values().filter(|&&r| r).count()
    }

    pub fn non_relevant_count(&self) -> usize {
        self.judgments.values().filter(|&&r| !r).count()
    }

    pub fn is_relevant(&self, doc_id: &str) -> bool {
        self.judgments.get(doc_id).copied().unwrap_or(false)
    }

    fn require_relevant(&self) -> Result<usize> {
        match self.relevant_count() {
            0 => Err(Error::NoRelevantJudgments(self.topic_id.clone())),
            r => Ok(r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BinaryQrels {
    pub topics: BTreeMap<String, JudgedTopic>,
}

pub fn binarize(qrels: &Qrels) -> BinaryQrels {
    let topics = qrels
        .judgments
        .iter()
        .map(|(topic, docs)| {
            let judgments = docs.iter().map(|(doc, &grade)| (doc.clone(), grade > 0)).collect();
            (
                topic.clone(),
                JudgedTopic {
                    topic_id: topic.clone(),
                    judgments,
                },
            )
        })
        .collect();
    BinaryQrels { topics }
}

/// Bpref with the denominator clamped to `min(R, N)`. `ranking` holds doc ids
/// in rank order; only judged documents influence the value.
pub fn bpref(ranking: &[&str], topic: &JudgedTopic) -> Result<f64> {
    let relevant = topic.require_relevant()?;
    let bound = relevant.min(topic.non_relevant_count());
    let mut non_relevant_above = 0usize;
    let mut sum = 0.0;
    for doc in ranking {
        match topic.judgments.get(*doc) {
            Some(true) if bound == 0 => sum += 1.0,
            Some(true) => sum += 1.0 - non_relevant_above.min(bound) as f64 / bound as f64,
            Some(false) => non_relevant_above += 1,
            None => {}
        }
    }
    Ok(sum / relevant as f64)
}

pub fn average_precision(ranking: &[&str], topic: &JudgedTopic) -> Result<f64> {
    let relevant = topic.require_relevant()?;
    let mut found = 0usize;
    let mut sum = 0.0;
    for (i, doc) in ranking.iter().enumerate() {
        if topic.is_relevant(doc) {
            found += 1;
            sum += found as f64 / (i + 1) as f64;
        }
    }
    Ok(sum / relevant as f64)
}

/// Fraction of the first `k` ranks holding relevant documents. Ranks past the
/// end of a short ranking count as non-relevant.
pub fn precision_at_k(ranking: &[&str], topic: &JudgedTopic, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let hits = ranking.iter().take(k).filter(|d| topic.is_relevant(d)).count();
    hits as f64 / k as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub bpref: f64,
    pub map: f64,
    pub p1: f64,
    pub p5: f64,
    pub p10: f64,
}

impl Metrics {
    pub fn compute(ranking: &[&str], topic: &JudgedTopic) -> Result<Self> {
        Ok(Self {
            bpref: bpref(ranking, topic)?,
            map: average_precision(ranking, topic)?,
            p1: precision_at_k(ranking, topic, 1),
            p5: precision_at_k(ranking, topic, 5),
            p10: precision_at_k(ranking, topic, 10),
        })
    }

    pub fn values(&self) -> [f64; 5] {
        [self.bpref, self.map, self.p1, self.p5, self.p10]
    }

    pub const NAMES: [&'static str; 5] = ["Bpref", "MAP", "P@1", "P@5", "P@10"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicMetrics {
    pub topic_id: String,
    pub retrieved: usize,
    pub relevant: usize,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub per_topic: Vec<TopicMetrics>,
    pub mean: Metrics,
    /// Judged topics without any relevant document; left out of the means.
    pub excluded: Vec<String>,
    /// Evaluated topics absent from the run; they score zero.
    pub missing_from_run: Vec<String>,
}

impl MetricsReport {
    pub fn evaluated(&self) -> usize {
        self.per_topic.len()
    }
}

/// Macro-averages the metrics over every judged topic with at least one
/// relevant document. Such topics missing from the run score zero.
pub fn evaluate(run: &RunFile, qrels: &Qrels) -> Result<MetricsReport> {
    let binary = binarize(qrels);
    let (evaluable, excluded): (Vec<&JudgedTopic>, Vec<&JudgedTopic>) =
        binary.topics.values().partition(|t| t.relevant_count() > 0);
    if !evaluable.iter().any(|t| run.topics.contains_key(&t.topic_id)) {
        return Err(Error::NoEvaluableTopics);
    }

    let mut per_topic = Vec::with_capacity(evaluable.len());
    let mut missing_from_run = Vec::new();
    for topic in &evaluable {
        if !run.topics.contains_key(&topic.topic_id) {
            missing_from_run.push(topic.topic_id.clone());
        }
        let ranking = run.ranking(&topic.topic_id);
        per_topic.push(TopicMetrics {
            topic_id: topic.topic_id.clone(),
            retrieved: ranking.len(),
            relevant: topic.relevant_count(),
            metrics: Metrics::compute(&ranking, topic)?,
        });
    }

    let n = per_topic.len() as f64;
    let mut sums = [0.0; 5];
    for t in &per_topic {
        for (s, v) in sums.iter_mut().zip(t.metrics.values()) {
            *s += v;
        }
    }
    let [bpref, map, p1, p5, p10] = sums.map(|s| s / n);
    Ok(MetricsReport {
        per_topic,
        mean: Metrics {
            bpref,
            map,
            p1,
            p5,
            p10,
        },
        excluded: excluded.iter().map(|t| t.topic_id.clone()).collect(),
        missing_from_run,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicOverlap {
    pub topic_id: String,
    pub left: usize,
    pub right: usize,
    pub shared: usize,
    /// |A ∩ B| / |A ∪ B| over the full rankings.
    pub jaccard: f64,
    /// Shared documents among the first ten of each ranking, divided by ten.
    pub overlap_at_10: f64,
}

/// Per-topic overlap between two runs over the union of their topics.
pub fn run_overlap(left: &RunFile, right: &RunFile) -> Vec<TopicOverlap> {
    let topics: std::collections::BTreeSet<&String> = left.topics.keys().chain(right.topics.keys()).collect();
    topics
        .into_iter()
        .map(|topic| {
            let a = left.ranking(topic);
            let b = right.ranking(topic);
            let set_a: HashSet<&str> = a.iter().copied().collect();
            let set_b: HashSet<&str> = b.iter().copied().collect();
            let shared = set_a.intersection(&set_b).count();
            let union = set_a.union(&set_b).count();
            let top_a: HashSet<&str> = a.iter().take(10).copied().collect();
            let top_shared = b.iter().take(10).filter(|d| top_a.contains(*d)).count();
            TopicOverlap {
                topic_id: topic.clone(),
                left: a.len(),
                right: b.len(),
                shared,
                jaccard: if union == 0 { 1.0 } else { shared as f64 / union as f64 },
                overlap_at_10: top_shared as f64 / 10.0,
            }
        })
        .collect()
}
