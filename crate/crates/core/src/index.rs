//! In-memory positional index over text tokens and opaque formula tokens.
//!
//! A subquery matches a document when every non-empty group of the subquery
//! is satisfied; groups are joined with AND. Within a group the terms are
//! combined per [`GroupMode`].

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{normalize_whitespace, Hit, ResultList, Subquery};

/// Lowercases and splits on every non-alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// `(1 + ln tf) * ln(1 + N / df)`
pub fn tf_idf(tf: u32, df: usize, doc_count: usize) -> f64 {
    (1.0 + (tf as f64).ln()) * (1.0 + doc_count as f64 / df as f64).ln()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub doc_id: String,
    pub body: String,
}

impl RawDocument {
    pub fn new(doc_id: impl Into<String>, body: impl Into<String>) -> Self {
        Self {
            doc_id: doc_id.into(),
            body: body.into(),
        }
    }
}

/// A tokenized document. Text token positions are their indices in
/// `text_tokens`; formula spans do not occupy positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub text_tokens: Vec<String>,
    /// Formula occurrences in order of appearance.
    pub math_tokens: Vec<String>,
}

impl Document {
    pub fn parse(raw: &RawDocument) -> Result<Self> {
        if raw.body.matches('$').count() % 2 == 1 {
            return Err(Error::MalformedDocument {
                doc_id: raw.doc_id.clone(),
                reason: "unbalanced `$`".into(),
            });
        }
        let mut text_tokens = Vec::new();
        let mut math_tokens = Vec::new();
        for (i, part) in raw.body.split('$').enumerate() {
            if i % 2 == 0 {
                text_tokens.extend(tokenize(part));
            } else {
                let formula = normalize_whitespace(part);
                if !formula.is_empty() {
                    math_tokens.push(formula);
                }
            }
        }
        Ok(Self {
            doc_id: raw.doc_id.clone(),
            text_tokens,
            math_tokens,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TextPosting {
    doc: u32,
    positions: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct Posting {
    doc: u32,
    tf: u32,
}

/// How the terms inside one group (formulae or keywords) combine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupMode {
    /// A document must match every term of the group.
    #[default]
    All,
    /// A document must match at least one term of the group.
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Index {
    doc_ids: Vec<String>,
    text: BTreeMap<String, Vec<TextPosting>>,
    math: BTreeMap<String, Vec<Posting>>,
    #[serde(skip)]
    mode: GroupMode,
}

impl Index {
    pub fn build<I>(corpus: I) -> Result<Self>
    where
        I: IntoIterator<Item = RawDocument>,
    {
        let mut index = Self {
            doc_ids: Vec::new(),
            text: BTreeMap::new(),
            math: BTreeMap::new(),
            mode: GroupMode::default(),
        };
        let mut seen = HashSet::new();
        for raw in corpus {
            if !seen.insert(raw.doc_id.clone()) {
                return Err(Error::DuplicateDocId(raw.doc_id));
            }
            index.add(Document::parse(&raw)?);
        }
        Ok(index)
    }

    fn add(&mut self, doc: Document) {
        let id = self.doc_ids.len() as u32;
        let mut positions: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
        for (pos, token) in doc.text_tokens.iter().enumerate() {
            positions.entry(token).or_default().push(pos as u32);
        }
        for (token, positions) in positions {
            self.text
                .entry(token.to_string())
                .or_default()
                .push(TextPosting { doc: id, positions });
        }
        let mut counts: BTreeMap<&str, u32> = BTreeMap::new();
        for formula in &doc.math_tokens {
            *counts.entry(formula).or_default() += 1;
        }
        for (formula, tf) in counts {
            self.math
                .entry(formula.to_string())
                .or_default()
                .push(Posting { doc: id, tf });
        }
        self.doc_ids.push(doc.doc_id);
    }

    pub fn with_mode(mut self, mode: GroupMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> GroupMode {
        self.mode
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn text_term_count(&self) -> usize {
        self.text.len()
    }

    pub fn math_term_count(&self) -> usize {
        self.math.len()
    }

    pub fn doc_id(&self, doc: u32) -> &str {
        &self.doc_ids[doc as usize]
    }

    /// Document frequency of a single text token.
    pub fn df(&self, token: &str) -> usize {
        self.text.get(token).map_or(0, Vec::len)
    }

    pub fn math_df(&self, formula: &str) -> usize {
        self.math.get(formula).map_or(0, Vec::len)
    }

    fn formula_postings(&self, formula: &str) -> Vec<Posting> {
        self.math.get(formula).cloned().unwrap_or_default()
    }

    /// Per-document occurrence counts of a keyword. Multi-token keywords count
    /// exact adjacent phrase occurrences.
    fn keyword_postings(&self, keyword: &str) -> Vec<Posting> {
        let tokens = tokenize(keyword);
        let lists: Option<Vec<&Vec<TextPosting>>> = tokens.iter().map(|t| self.text.get(t)).collect();
        let Some(lists) = lists.filter(|l| !l.is_empty()) else {
            return Vec::new();
        };
        if lists.len() == 1 {
            return lists[0]
                .iter()
                .map(|p| Posting {
                    doc: p.doc,
                    tf: p.positions.len() as u32,
                })
                .collect();
        }

        let mut cursors = vec![0usize; lists.len()];
        let mut out = Vec::new();
        'docs: for head in lists[0] {
            let mut per_token = vec![&head.positions];
            for (list, cursor) in lists.iter().zip(cursors.iter_mut()).skip(1) {
                while *cursor < list.len() && list[*cursor].doc < head.doc {
                    *cursor += 1;
                }
                match list.get(*cursor) {
                    Some(p) if p.doc == head.doc => per_token.push(&p.positions),
                    _ => continue 'docs,
                }
            }
            let tf = head
                .positions
                .iter()
                .filter(|&&start| {
                    per_token
                        .iter()
                        .enumerate()
                        .skip(1)
                        .all(|(offset, ps)| ps.binary_search(&(start + offset as u32)).is_ok())
                })
                .count() as u32;
            if tf > 0 {
                out.push(Posting { doc: head.doc, tf });
            }
        }
        out
    }

    /// Ranks the documents matching `subquery`, at most `limit` of them.
    pub fn search(&self, subquery: &Subquery, limit: usize) -> Result<ResultList> {
        if subquery.is_empty() {
            return Err(Error::EmptySubquery);
        }
        let formulae: Vec<Vec<Posting>> = subquery
            .formulae
            .iter()
            .map(|f| self.formula_postings(f.as_str()))
            .collect();
        let keywords: Vec<Vec<Posting>> = subquery
            .keywords
            .iter()
            .map(|k| self.keyword_postings(k.as_str()))
            .collect();

        let mut candidates: Option<HashSet<u32>> = None;
        for group in [&formulae, &keywords] {
            if group.is_empty() {
                continue;
            }
            let matched = self.group_matches(group);
            candidates = Some(match candidates {
                None => matched,
                Some(c) => c.intersection(&matched).copied().collect(),
            });
        }
        let candidates = candidates.unwrap_or_default();

        let n = self.doc_count();
        let mut scores: HashMap<u32, f64> = HashMap::new();
        for postings in formulae.iter().chain(&keywords) {
            let df = postings.len();
            for p in postings.iter().filter(|p| candidates.contains(&p.doc)) {
                *scores.entry(p.doc).or_insert(0.0) += tf_idf(p.tf, df, n);
            }
        }
        let hits = scores
            .into_iter()
            .map(|(doc, score)| Hit {
                doc_id: self.doc_id(doc).to_string(),
                score,
            })
            .collect();
        Ok(ResultList::from_scored(0, hits, limit))
    }

    fn group_matches(&self, group: &[Vec<Posting>]) -> HashSet<u32> {
        let sets = group
            .iter()
            .map(|ps| ps.iter().map(|p| p.doc).collect::<HashSet<u32>>());
        match self.mode {
            GroupMode::Any => sets.flatten().collect(),
            GroupMode::All => sets
                .reduce(|a, b| a.intersection(&b).copied().collect())
                .unwrap_or_default(),
        }
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let file = std::io::BufWriter::new(fs::File::create(path)?);
        serde_json::to_writer(file, self).map_err(std::io::Error::other)
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let file = std::io::BufReader::new(fs::File::open(path)?);
        serde_json::from_reader(file).map_err(std::io::Error::other)
    }
}

/// Parses a corpus file: `<doc_id><TAB><body>` per line. Blank lines are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<RawDocument>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, line)| {
            let (id, body) = line.split_once('\t').ok_or_else(|| Error::Format {
                line: n + 1,
                reason: "expected `<doc_id><TAB><body>`".into(),
            })?;
            let id = id.trim();
            if id.is_empty() {
                return Err(Error::Format {
                    line: n + 1,
                    reason: "empty document id".into(),
                });
            }
            Ok(RawDocument::new(id, body.trim_end_matches('\r')))
        })
        .collect()
}

/// Reads a corpus from a TSV file or from a directory of `<doc_id>.txt` files.
pub fn load_corpus(path: &Path) -> anyhow::Result<Vec<RawDocument>> {
    if !path.is_dir() {
        return Ok(parse_corpus(&fs::read_to_string(path)?)?);
    }
    let mut files: Vec<_> = fs::read_dir(path)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let id = p
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| anyhow::anyhow!("bad file name {}", p.display()))?
                .to_string();
            Ok(RawDocument::new(id, fs::read_to_string(&p)?))
        })
        .collect()
}
