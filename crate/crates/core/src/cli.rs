//! Command-line surface: `index`, `batch`, `eval`, `stats`.
//!
//! Command handlers write their primary output to `out` and diagnostics
//! (timings, skipped topics, overlap reports) to `log`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::evaluation::{evaluate, run_overlap, Metrics};
use crate::expansion::Strategy;
use crate::index::{load_corpus, GroupMode, Index};
use crate::model::{parse_topics, DEFAULT_LIMIT};
use crate::pipeline::{default_tag, run_batch, BatchOutput, RunConfig};
use crate::trec::{parse_qrels, parse_run, write_run, MAX_RUN_DEPTH};

#[derive(Debug, Parser)]
#[command(
    name = "mathrelax",
    version,
    about = "Relaxed math/text querying with strip-merged results"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an index snapshot from a corpus file or directory.
    Index { corpus: PathBuf, index: PathBuf },
    /// Run every topic through a strategy and write a TREC run file.
    Batch {
        index: PathBuf,
        topics: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Run tag (column 6). Defaults to `<strategy>-<limit>`.
        #[arg(long)]
        tag: Option<String>,
        /// Write the run here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// With --reverse, also write the forward/reversed overlap report as CSV.
        #[arg(long)]
        overlap_report: Option<PathBuf>,
    },
    /// Evaluate a run file against TREC qrels.
    Eval {
        run: PathBuf,
        qrels: PathBuf,
        #[arg(long)]
        per_topic: bool,
    },
    /// Per-subquery hit counts for every topic.
    Stats {
        index: PathBuf,
        topics: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Also write the counts as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Oqo,
    Mto,
    Tto,
    Lro,
    Loo,
    Looto,
    Aps,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Oqo => Strategy::Oqo,
            StrategyArg::Mto => Strategy::Mto,
            StrategyArg::Tto => Strategy::Tto,
            StrategyArg::Lro => Strategy::Lro,
            StrategyArg::Loo => Strategy::Loo,
            StrategyArg::Looto => Strategy::Looto,
            StrategyArg::Aps => Strategy::Aps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupModeArg {
    All,
    Any,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "lro")]
    pub strategy: StrategyArg,
    /// Hits fetched per subquery.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    pub subquery_limit: usize,
    /// Hits kept per topic after merging.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    pub limit: usize,
    /// Reverse the formula and keyword groups of every topic.
    #[arg(long)]
    pub reverse: bool,
    /// How terms combine inside a group.
    #[arg(long, value_enum, default_value = "all")]
    pub group_mode: GroupModeArg,
}

impl RunArgs {
    pub fn config(&self, tag: Option<&str>) -> anyhow::Result<RunConfig> {
        if self.subquery_limit == 0 || self.limit == 0 {
            bail!("limits must be at least 1");
        }
        if self.limit > MAX_RUN_DEPTH {
            bail!("--limit may not exceed {MAX_RUN_DEPTH}");
        }
        let strategy = Strategy::from(self.strategy);
        let run_tag = match tag {
            Some(t) if t.is_empty() || t.contains(char::is_whitespace) => {
                bail!("run tag must be a non-empty word")
            }
            Some(t) => t.to_string(),
            None => default_tag(strategy, self.limit),
        };
        Ok(RunConfig {
            strategy,
            per_subquery_limit: self.subquery_limit,
            final_limit: self.limit,
            run_tag,
            reverse_topics: self.reverse,
        })
    }

    fn group_mode(&self) -> GroupMode {
        match self.group_mode {
            GroupModeArg::All => GroupMode::All,
            GroupModeArg::Any => GroupMode::Any,
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, log: &mut dyn Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Index { corpus, index } => cmd_index(&corpus, &index, out),
        Command::Batch {
            index,
            topics,
            run,
            tag,
            output,
            overlap_report,
        } => {
            let config = run.config(tag.as_deref())?;
            let index = load_index(&index)?.with_mode(run.group_mode());
            let text = cmd_batch(&index, &topics, &config, overlap_report.as_deref(), log)?;
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Eval { run, qrels, per_topic } => cmd_eval(&run, &qrels, per_topic, out),
        Command::Stats {
            index,
            topics,
            run,
            csv,
        } => {
            let config = run.config(None)?;
            let index = load_index(&index)?.with_mode(run.group_mode());
            cmd_stats(&index, &topics, &config, csv.as_deref(), out, log)
        }
    }
}

fn load_index(path: &Path) -> anyhow::Result<Index> {
    Index::load(path).with_context(|| format!("loading index {}", path.display()))
}

pub fn cmd_index(corpus: &Path, index_path: &Path, out: &mut dyn Write) -> anyhow::Result<()> {
    let docs = load_corpus(corpus).with_context(|| format!("reading corpus {}", corpus.display()))?;
    let index = Index::build(docs).context("building index")?;
    index
        .save(index_path)
        .with_context(|| format!("writing {}", index_path.display()))?;
    writeln!(
        out,
        "N={} text_terms={} math_terms={}",
        index.doc_count(),
        index.text_term_count(),
        index.math_term_count()
    )?;
    Ok(())
}

fn run_topics(
    index: &Index,
    topics_path: &Path,
    config: &RunConfig,
    log: &mut dyn Write,
) -> anyhow::Result<BatchOutput> {
    let text = fs::read_to_string(topics_path).with_context(|| format!("reading topics {}", topics_path.display()))?;
    let topics = parse_topics(&text)?;
    let output = run_batch(index, &topics, config);
    for (id, err) in &output.failures {
        writeln!(log, "skipped topic {id}: {err}")?;
    }
    Ok(output)
}

/// Returns the run file text. Timing goes to `log`; with `--reverse` the
/// forward run is computed as well and an overlap report is logged.
pub fn cmd_batch(
    index: &Index,
    topics_path: &Path,
    config: &RunConfig,
    overlap_csv: Option<&Path>,
    log: &mut dyn Write,
) -> anyhow::Result<String> {
    let output = run_topics(index, topics_path, config, log)?;
    for t in &output.topics {
        writeln!(
            log,
            "{}\t{} subqueries\t{} hits\t{:.3} ms",
            t.query.topic_id,
            t.plan.len(),
            t.merged.len(),
            t.elapsed.as_secs_f64() * 1e3
        )?;
    }
    writeln!(
        log,
        "{} topics, cumulative search time {:.3} s",
        output.topics.len(),
        output.cumulative_time().as_secs_f64()
    )?;
    let run = output.run_file(&config.run_tag);

    if config.reverse_topics {
        let forward_config = RunConfig {
            reverse_topics: false,
            ..config.clone()
        };
        let forward = run_batch(
            index,
            &parse_topics(&fs::read_to_string(topics_path)?)?,
            &forward_config,
        )
        .run_file(&config.run_tag);
        let mut csv = String::from("topic,forward,reversed,shared,jaccard,overlap_at_10\n");
        writeln!(log, "overlap of forward and reversed topics:")?;
        for o in run_overlap(&forward, &run) {
            writeln!(
                log,
                "{}\tforward={}\treversed={}\tshared={}\tjaccard={:.4}\toverlap@10={:.1}",
                o.topic_id, o.left, o.right, o.shared, o.jaccard, o.overlap_at_10
            )?;
            let _ = writeln!(
                csv,
                "{},{},{},{},{:.6},{:.1}",
                o.topic_id, o.left, o.right, o.shared, o.jaccard, o.overlap_at_10
            );
        }
        if let Some(path) = overlap_csv {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(write_run(&run))
}

pub fn cmd_eval(run_path: &Path, qrels_path: &Path, per_topic: bool, out: &mut dyn Write) -> anyhow::Result<()> {
    let run = parse_run(&fs::read_to_string(run_path).with_context(|| format!("reading {}", run_path.display()))?)
        .with_context(|| format!("parsing run {}", run_path.display()))?;
    let qrels =
        parse_qrels(&fs::read_to_string(qrels_path).with_context(|| format!("reading {}", qrels_path.display()))?)
            .with_context(|| format!("parsing qrels {}", qrels_path.display()))?;
    let report = evaluate(&run, &qrels)?;

    let header = Metrics::NAMES.join("\t");
    if per_topic {
        writeln!(out, "topic\t{header}")?;
        for t in &report.per_topic {
            let values: Vec<String> = t.metrics.values().iter().map(|v| format!("{v:.4}")).collect();
            writeln!(out, "{}\t{}", t.topic_id, values.join("\t"))?;
        }
    }
    for (name, value) in Metrics::NAMES.iter().zip(report.mean.values()) {
        writeln!(out, "{name:<6}\tall\t{value:.4}")?;
    }
    writeln!(out, "topics\tall\t{}", report.evaluated())?;
    if !report.excluded.is_empty() {
        writeln!(out, "excluded (no relevant)\tall\t{}", report.excluded.join(","))?;
    }
    if !report.missing_from_run.is_empty() {
        writeln!(out, "missing from run\tall\t{}", report.missing_from_run.join(","))?;
    }
    Ok(())
}

pub fn cmd_stats(
    index: &Index,
    topics_path: &Path,
    config: &RunConfig,
    csv_path: Option<&Path>,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> anyhow::Result<()> {
    let output = run_topics(index, topics_path, config, log)?;
    let mut csv = String::from("topic,subquery,mask,hits,fraction\n");
    let width = output.topics.iter().map(|t| t.plan.len()).max().unwrap_or(0);
    let header: Vec<String> = (1..=width).map(|i| format!("sq{i}")).collect();
    writeln!(out, "topic\t{}", header.join("\t"))?;
    for t in &output.topics {
        let stats = t.stats(config.per_subquery_limit);
        let cells: Vec<String> = stats
            .iter()
            .map(|s| format!("{} ({:.3})", s.hits, s.fraction))
            .collect();
        writeln!(out, "{}\t{}", t.query.topic_id, cells.join("\t"))?;
        for s in stats {
            let _ = writeln!(
                csv,
                "{},{},{},{},{:.6}",
                t.query.topic_id, s.subquery, s.mask, s.hits, s.fraction
            );
        }
    }
    if let Some(path) = csv_path {
        fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
