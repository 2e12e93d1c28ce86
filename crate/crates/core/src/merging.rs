//! Strip-merging of per-subquery result lists.
//!
//! Scores from different subqueries are not comparable, so lists are
//! interleaved by position instead: each round takes a strip of up to
//! `strip_width` unseen hits from every list in plan order. Exhausted lists
//! drop out; the widths of the remaining lists stay as they were.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::expansion::SubqueryPlan;
use crate::model::ResultList;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedItem {
    pub doc_id: String,
    pub final_score: f64,
    /// Position of the source list in the plan.
    pub source_subquery: usize,
    /// 1-based rank within the source list.
    pub source_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MergedList {
    pub topic_id: String,
    pub items: Vec<MergedItem>,
}

impl MergedList {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|i| i.doc_id.as_str())
    }
}

/// Interleaves `lists` (each paired with its strip width) into one ranking of
/// at most `limit` distinct documents.
///
/// A document already merged is skipped and does not count against the
/// current strip, so a strip always contributes up to `width` new documents.
/// The item at position `i` gets score `(limit - i) / limit`.
pub fn strip_merge(topic_id: &str, lists: &[(&ResultList, usize)], limit: usize) -> MergedList {
    let mut cursors = vec![0usize; lists.len()];
    let mut seen: HashSet<&str> = HashSet::new();
    let mut items = Vec::new();

    let push = |items: &mut Vec<MergedItem>, doc_id: &str, source: usize, rank: usize| {
        let i = items.len();
        items.push(MergedItem {
            doc_id: doc_id.to_string(),
            final_score: (limit - i) as f64 / limit as f64,
            source_subquery: source,
            source_rank: rank,
        });
    };

    'rounds: loop {
        let mut progressed = false;
        for (source, ((list, width), cursor)) in lists.iter().zip(cursors.iter_mut()).enumerate() {
            let mut taken = 0;
            while taken < *width && *cursor < list.hits.len() {
                let hit = &list.hits[*cursor];
                *cursor += 1;
                if !seen.insert(hit.doc_id.as_str()) {
                    continue;
                }
                push(&mut items, &hit.doc_id, source, *cursor);
                taken += 1;
                progressed = true;
                if items.len() >= limit {
                    break 'rounds;
                }
            }
        }
        if !progressed {
            break;
        }
    }

    MergedList {
        topic_id: topic_id.to_string(),
        items,
    }
}

/// Merges the result lists of a plan using the plan's strip widths.
pub fn merge_plan(topic_id: &str, plan: &SubqueryPlan, lists: &[ResultList], limit: usize) -> MergedList {
    let paired: Vec<(&ResultList, usize)> = lists
        .iter()
        .zip(&plan.entries)
        .map(|(l, e)| (l, e.strip_width))
        .collect();
    strip_merge(topic_id, &paired, limit)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubqueryStat {
    /// 1-based position in the plan.
    pub subquery: usize,
    pub mask: String,
    pub hits: usize,
    /// `hits / per_subquery_limit`.
    pub fraction: f64,
}

/// Hit counts per subquery, absolute and relative to the per-subquery cap.
pub fn merge_stats(plan: &SubqueryPlan, lists: &[ResultList], per_subquery_limit: usize) -> Vec<SubqueryStat> {
    plan.entries
        .iter()
        .zip(lists)
        .enumerate()
        .map(|(i, (e, l))| SubqueryStat {
            subquery: i + 1,
            mask: e.subquery.mask.to_string(),
            hits: l.len(),
            fraction: l.len() as f64 / per_subquery_limit as f64,
        })
        .collect()
}
