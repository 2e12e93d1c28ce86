//! Query, mask and result-list data model, plus the query-string parser.
//!
//! A raw query mixes formulae written between dollar signs with text
//! keywords. Quoted spans form one multi-word keyword; every other bare
//! word is a keyword of its own:
//!
//! ```text
//! $a^2+b^2=c^2$ "pythagorean theorem" triangle
//! ```

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of hits a single subquery may return.
pub const DEFAULT_LIMIT: usize = 1000;

/// Collapses internal whitespace runs to a single space and trims the ends.
pub fn normalize_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// An opaque, whitespace-normalized formula token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormulaTerm(String);

impl FormulaTerm {
    pub fn new(raw: &str) -> Self {
        Self(normalize_whitespace(raw))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FormulaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A text keyword of one or more words. Multi-word keywords are matched as phrases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KeywordTerm(String);

impl KeywordTerm {
    pub fn new(raw: &str) -> Self {
        Self(normalize_whitespace(raw))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_phrase(&self) -> bool {
        self.0.contains(' ')
    }
}

impl fmt::Display for KeywordTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub topic_id: String,
    pub formulae: Vec<FormulaTerm>,
    pub keywords: Vec<KeywordTerm>,
}

impl Query {
    /// Builds a query from already-split groups. Terms are normalized and empty
    /// terms are dropped.
    pub fn new<F, K>(topic_id: impl Into<String>, formulae: F, keywords: K) -> Result<Self>
    where
        F: IntoIterator,
        F::Item: AsRef<str>,
        K: IntoIterator,
        K::Item: AsRef<str>,
    {
        let formulae: Vec<_> = formulae
            .into_iter()
            .map(|f| FormulaTerm::new(f.as_ref()))
            .filter(|f| !f.as_str().is_empty())
            .collect();
        let keywords: Vec<_> = keywords
            .into_iter()
            .map(|k| KeywordTerm::new(k.as_ref()))
            .filter(|k| !k.as_str().is_empty())
            .collect();
        if formulae.is_empty() && keywords.is_empty() {
            return Err(Error::EmptyQuery);
        }
        Ok(Self {
            topic_id: topic_id.into(),
            formulae,
            keywords,
        })
    }

    pub fn formula_count(&self) -> usize {
        self.formulae.len()
    }

    pub fn keyword_count(&self) -> usize {
        self.keywords.len()
    }

    pub fn term_count(&self) -> usize {
        self.formulae.len() + self.keywords.len()
    }

    pub fn full_mask(&self) -> SubqueryMask {
        SubqueryMask::full(self.formula_count(), self.keyword_count())
    }

    /// Renders the query back into the raw syntax accepted by [`parse_query`].
    pub fn to_raw(&self) -> String {
        let formulae = self.formulae.iter().map(|f| format!("${f}$"));
        let keywords = self.keywords.iter().map(|k| {
            if k.is_phrase() {
                format!("\"{k}\"")
            } else {
                k.to_string()
            }
        });
        formulae.chain(keywords).collect::<Vec<_>>().join(" ")
    }
}

/// Parses a raw query string into formula and keyword groups.
pub fn parse_query(raw: &str, topic_id: &str) -> Result<Query> {
    for delim in ['$', '"'] {
        if raw.chars().filter(|&c| c == delim).count() % 2 == 1 {
            return Err(Error::UnbalancedDelimiter(delim));
        }
    }

    let mut formulae = Vec::new();
    let mut keywords = Vec::new();
    let mut bare = String::new();
    let mut chars = raw.chars();

    fn flush(bare: &mut String, keywords: &mut Vec<String>) {
        if !bare.is_empty() {
            keywords.push(std::mem::take(bare));
        }
    }

    while let Some(c) = chars.next() {
        match c {
            '$' | '"' => {
                flush(&mut bare, &mut keywords);
                let span: String = chars.by_ref().take_while(|&d| d != c).collect();
                if c == '$' {
                    formulae.push(span);
                } else {
                    keywords.push(span);
                }
            }
            c if c.is_whitespace() => flush(&mut bare, &mut keywords),
            c => bare.push(c),
        }
    }
    flush(&mut bare, &mut keywords);

    Query::new(topic_id, formulae, keywords)
}

/// Parses a topic file: `<topic_id><TAB><raw query>` per line, `#` comments
/// and blank lines ignored. Each entry carries its own parse result so that a
/// malformed topic does not abort the whole batch.
pub fn parse_topics(text: &str) -> Result<Vec<(String, Result<Query>)>> {
    let mut topics = Vec::new();
    let mut seen = HashSet::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (id, raw) = line.split_once('\t').ok_or_else(|| Error::Format {
            line: n + 1,
            reason: "expected `<topic_id><TAB><query>`".into(),
        })?;
        let id = id.trim();
        if id.is_empty() {
            return Err(Error::Format {
                line: n + 1,
                reason: "empty topic id".into(),
            });
        }
        if !seen.insert(id.to_string()) {
            return Err(Error::Format {
                line: n + 1,
                reason: format!("duplicate topic id `{id}`"),
            });
        }
        topics.push((id.to_string(), parse_query(raw, id)));
    }
    Ok(topics)
}

/// Inclusion bits over the formula group and the keyword group of a query.
///
/// Rendered as formula bits, a hyphen, then keyword bits: `10-111`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubqueryMask {
    pub formula_bits: Vec<bool>,
    pub keyword_bits: Vec<bool>,
}

impl SubqueryMask {
    pub fn new(formula_bits: Vec<bool>, keyword_bits: Vec<bool>) -> Result<Self> {
        let mask = Self {
            formula_bits,
            keyword_bits,
        };
        if mask.is_empty() {
            return Err(Error::EmptyMask);
        }
        Ok(mask)
    }

    pub fn full(formulae: usize, keywords: usize) -> Self {
        Self {
            formula_bits: vec![true; formulae],
            keyword_bits: vec![true; keywords],
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.formula_bits.iter().chain(&self.keyword_bits).any(|&b| b)
    }

    pub fn is_full(&self) -> bool {
        self.formula_bits.iter().chain(&self.keyword_bits).all(|&b| b)
    }

    pub fn formulae_set(&self) -> usize {
        self.formula_bits.iter().filter(|&&b| b).count()
    }

    pub fn keywords_set(&self) -> usize {
        self.keyword_bits.iter().filter(|&&b| b).count()
    }

    /// Number of components dropped relative to the full mask.
    pub fn removed(&self) -> usize {
        self.formula_bits.len() + self.keyword_bits.len() - self.formulae_set() - self.keywords_set()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.formula_bits.len(), self.keyword_bits.len())
    }

    /// Compares masks of equal shape as binary strings, formula bits first.
    pub fn cmp_bits(&self, other: &Self) -> Ordering {
        self.formula_bits
            .iter()
            .chain(&self.keyword_bits)
            .cmp(other.formula_bits.iter().chain(&other.keyword_bits))
    }
}

impl fmt::Display for SubqueryMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bit = |b: &bool| if *b { '1' } else { '0' };
        let formulae: String = self.formula_bits.iter().map(bit).collect();
        let keywords: String = self.keyword_bits.iter().map(bit).collect();
        write!(f, "{formulae}-{keywords}")
    }
}

impl FromStr for SubqueryMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = || Error::InvalidMask(s.to_string());
        let (formulae, keywords) = s.split_once('-').ok_or_else(invalid)?;
        let bits = |part: &str| {
            part.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(invalid()),
                })
                .collect::<Result<Vec<_>>>()
        };
        Self::new(bits(formulae)?, bits(keywords)?)
    }
}

pub fn render_mask(mask: &SubqueryMask) -> String {
    mask.to_string()
}

pub fn parse_mask(s: &str) -> Result<SubqueryMask> {
    s.parse()
}

/// The terms of a query selected by a mask, in their original group order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subquery {
    pub mask: SubqueryMask,
    pub formulae: Vec<FormulaTerm>,
    pub keywords: Vec<KeywordTerm>,
}

impl Subquery {
    pub fn is_empty(&self) -> bool {
        self.formulae.is_empty() && self.keywords.is_empty()
    }
}

impl fmt::Display for Subquery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .formulae
            .iter()
            .map(|t| format!("${t}$"))
            .chain(self.keywords.iter().map(|k| {
                if k.is_phrase() {
                    format!("\"{k}\"")
                } else {
                    k.to_string()
                }
            }))
            .collect();
        f.write_str(&terms.join(" "))
    }
}

pub fn apply_mask(query: &Query, mask: &SubqueryMask) -> Result<Subquery> {
    if mask.shape() != (query.formula_count(), query.keyword_count()) {
        return Err(Error::MaskShapeMismatch {
            got_formulae: mask.formula_bits.len(),
            got_keywords: mask.keyword_bits.len(),
            want_formulae: query.formula_count(),
            want_keywords: query.keyword_count(),
        });
    }
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    fn select<T: Clone>(terms: &[T], bits: &[bool]) -> Vec<T> {
        terms
            .iter()
            .zip(bits)
            .filter(|(_, &b)| b)
            .map(|(t, _)| t.clone())
            .collect()
    }
    Ok(Subquery {
        mask: mask.clone(),
        formulae: select(&query.formulae, &mask.formula_bits),
        keywords: select(&query.keywords, &mask.keyword_bits),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hit {
    pub doc_id: String,
    pub score: f64,
}

/// Ranked hits of one subquery. Scores are only meaningful within the list.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultList {
    pub subquery_index: usize,
    pub hits: Vec<Hit>,
}

impl ResultList {
    /// Sorts by score descending then doc id ascending, keeps the first
    /// occurrence of each doc id and truncates to `limit`.
    pub fn from_scored(subquery_index: usize, mut hits: Vec<Hit>, limit: usize) -> Self {
        hits.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.doc_id.cmp(&b.doc_id)));
        let mut seen = HashSet::new();
        hits.retain(|h| seen.insert(h.doc_id.clone()));
        hits.truncate(limit);
        Self { subquery_index, hits }
    }

    /// Builds a list from doc ids already in rank order, with descending
    /// placeholder scores.
    pub fn from_ranked<I, S>(subquery_index: usize, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        let n = ids.len();
        let hits = ids
            .into_iter()
            .enumerate()
            .map(|(i, doc_id)| Hit {
                doc_id,
                score: (n - i) as f64,
            })
            .collect();
        Self { subquery_index, hits }
    }

    pub fn len(&self) -> usize {
        self.hits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }
}
