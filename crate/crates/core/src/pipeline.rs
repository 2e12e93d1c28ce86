//! Per-topic execution: expand, search every subquery, strip-merge.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{reverse_query, Strategy, SubqueryPlan};
use crate::index::Index;
use crate::merging::{merge_plan, merge_stats, MergedList, SubqueryStat};
use crate::model::{Query, ResultList, DEFAULT_LIMIT};
use crate::trec::RunFile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub strategy: Strategy,
    pub per_subquery_limit: usize,
    pub final_limit: usize,
    pub run_tag: String,
    pub reverse_topics: bool,
}

impl RunConfig {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            per_subquery_limit: DEFAULT_LIMIT,
            final_limit: DEFAULT_LIMIT,
            run_tag: default_tag(strategy, DEFAULT_LIMIT),
            reverse_topics: false,
        }
    }
}

pub fn default_tag(strategy: Strategy, limit: usize) -> String {
    format!("{strategy}-{limit}")
}

#[derive(Debug, Clone)]
pub struct TopicRun {
    pub query: Query,
    pub plan: SubqueryPlan,
    pub lists: Vec<ResultList>,
    pub merged: MergedList,
    pub elapsed: Duration,
}

impl TopicRun {
    pub fn stats(&self, per_subquery_limit: usize) -> Vec<SubqueryStat> {
        merge_stats(&self.plan, &self.lists, per_subquery_limit)
    }
}

/// Runs every subquery of the plan against the index, in plan order.
pub fn execute_plan(index: &Index, plan: &SubqueryPlan, limit: usize) -> Result<Vec<ResultList>> {
    plan.entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut list = index.search(&e.subquery, limit)?;
            list.subquery_index = i;
            Ok(list)
        })
        .collect()
}

pub fn run_topic(index: &Index, query: &Query, config: &RunConfig) -> Result<TopicRun> {
    let start = Instant::now();
    let query = if config.reverse_topics {
        reverse_query(query)
    } else {
        query.clone()
    };
    let plan = config.strategy.expand(&query)?;
    let lists = execute_plan(index, &plan, config.per_subquery_limit)?;
    let merged = merge_plan(&query.topic_id, &plan, &lists, config.final_limit);
    Ok(TopicRun {
        query,
        plan,
        lists,
        merged,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone)]
pub struct BatchOutput {
    /// Successful topics, ordered by topic id.
    pub topics: Vec<TopicRun>,
    /// Topics that could not be parsed or expanded, with the reason.
    pub failures: Vec<(String, Error)>,
}

impl BatchOutput {
    pub fn run_file(&self, tag: &str) -> RunFile {
        RunFile::from_merged(self.topics.iter().map(|t| &t.merged), tag)
    }

    pub fn cumulative_time(&self) -> Duration {
        self.topics.iter().map(|t| t.elapsed).sum()
    }
}

/// Runs all topics concurrently. Output order is by topic id.
pub fn run_batch(index: &Index, topics: &[(String, Result<Query>)], config: &RunConfig) -> BatchOutput {
    let outcomes: Vec<(String, Result<TopicRun>)> = topics
        .par_iter()
        .map(|(id, parsed)| {
            let outcome = parsed.clone().and_then(|q| run_topic(index, &q, config));
            (id.clone(), outcome)
        })
        .collect();

    let mut output = BatchOutput {
        topics: Vec::new(),
        failures: Vec::new(),
    };
    for (id, outcome) in outcomes {
        match outcome {
            Ok(run) => output.topics.push(run),
            Err(e) => output.failures.push((id, e)),
        }
    }
    output.topics.sort_by(|a, b| a.query.topic_id.cmp(&b.query.topic_id));
    output.failures.sort_by(|a, b| a.0.cmp(&b.0));
    output
}
