//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the code paths it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

/// Relevance of one document for one topic: `None` = unjudged.
pub type Judgments = BTreeMap<String, Option<bool>>;

fn judged(j: &Judgments, doc: &str) -> Option<bool> {
    j.get(doc).copied().flatten()
}

/// Set-based Bpref: for each retrieved relevant document, the share of the
/// first min(R, N) retrieved non-relevant documents ranked above it.
pub fn oracle_bpref(ranking: &[String], j: &Judgments) -> Option<f64> {
    let r = j.values().filter(|v| **v == Some(true)).count();
    let n = j.values().filter(|v| **v == Some(false)).count();
    if r == 0 {
        return None;
    }
    let bound = r.min(n);
    let counted_nonrel: Vec<usize> = (0..ranking.len())
        .filter(|&i| judged(j, &ranking[i]) == Some(false))
        .take(bound)
        .collect();
    let mut total = 0.0;
    for (pos, doc) in ranking.iter().enumerate() {
        if judged(j, doc) != Some(true) {
            continue;
        }
        if bound == 0 {
            total += 1.0;
            continue;
        }
        let above = counted_nonrel.iter().filter(|&&p| p < pos).count();
        total += 1.0 - above as f64 / bound as f64;
    }
    Some(total / r as f64)
}

pub fn oracle_ap(ranking: &[String], j: &Judgments) -> Option<f64> {
    let r = j.values().filter(|v| **v == Some(true)).count();
    if r == 0 {
        return None;
    }
    let rel: Vec<bool> = ranking.iter().map(|d| judged(j, d) == Some(true)).collect();
    let mut total = 0.0;
    for k in 1..=rel.len() {
        if rel[k - 1] {
            let in_prefix = rel[..k].iter().filter(|&&x| x).count();
            total += in_prefix as f64 / k as f64;
        }
    }
    Some(total / r as f64)
}

pub fn oracle_precision(ranking: &[String], j: &Judgments, k: usize) -> f64 {
    let mut padded: Vec<bool> = ranking.iter().map(|d| judged(j, d) == Some(true)).collect();
    padded.resize(padded.len().max(k), false);
    padded[..k].iter().filter(|&&x| x).count() as f64 / k as f64
}

/// A random judged pool of up to 8 documents and a random ranking over a
/// subset of it (plus possibly unjudged documents).
pub struct MetricCase {
    pub grades: BTreeMap<String, u8>,
    pub ranking: Vec<String>,
}

impl MetricCase {
    pub fn random(rng: &mut impl Rng) -> Self {
        let pool = rng.gen_range(1..=8);
        let docs: Vec<String> = (0..pool).map(|i| format!("d{i}")).collect();
        let mut grades = BTreeMap::new();
        for d in &docs {
            if rng.gen_bool(0.75) {
                grades.insert(d.clone(), rng.gen_range(0..=4));
            }
        }
        let mut ranking: Vec<String> = docs.into_iter().filter(|_| rng.gen_bool(0.8)).collect();
        ranking.shuffle(rng);
        Self { grades, ranking }
    }

    pub fn judgments(&self) -> Judgments {
        let mut j: Judgments = self.grades.iter().map(|(d, &g)| (d.clone(), Some(g > 0))).collect();
        for d in &self.ranking {
            j.entry(d.clone()).or_insert(None);
        }
        j
    }
}

/// Linear-scan search over raw `(doc_id, body)` pairs with the same matching
/// and scoring rules as the index: AND between non-empty groups, `all` or
/// `any` inside a group, `(1 + ln tf) * ln(1 + N / df)` summed over matched
/// terms in query order.
pub struct ScanCorpus {
    pub docs: Vec<(String, Vec<String>, Vec<String>)>,
}

fn scan_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

impl ScanCorpus {
    pub fn new(docs: &[(String, String)]) -> Self {
        let docs = docs
            .iter()
            .map(|(id, body)| {
                let mut text = Vec::new();
                let mut math = Vec::new();
                for (i, part) in body.split('$').enumerate() {
                    if i % 2 == 0 {
                        text.extend(scan_tokens(part));
                    } else {
                        let f = part.split_whitespace().collect::<Vec<_>>().join(" ");
                        if !f.is_empty() {
                            math.push(f);
                        }
                    }
                }
                (id.clone(), text, math)
            })
            .collect();
        Self { docs }
    }

    fn formula_tf(&self, d: usize, formula: &str) -> u32 {
        self.docs[d].2.iter().filter(|m| *m == formula).count() as u32
    }

    fn keyword_tf(&self, d: usize, keyword: &str) -> u32 {
        let words = scan_tokens(keyword);
        let text = &self.docs[d].1;
        if words.is_empty() || text.len() < words.len() {
            return 0;
        }
        (0..=text.len() - words.len())
            .filter(|&s| text[s..s + words.len()] == words[..])
            .count() as u32
    }

    /// Returns `(doc_id, score)` sorted by score desc, doc id asc.
    pub fn search(&self, formulae: &[&str], keywords: &[&str], any: bool, limit: usize) -> Vec<(String, f64)> {
        let n = self.docs.len();
        let tfs: Vec<Vec<u32>> = formulae
            .iter()
            .map(|f| (0..n).map(|d| self.formula_tf(d, f)).collect())
            .chain(keywords.iter().map(|k| (0..n).map(|d| self.keyword_tf(d, k)).collect()))
            .collect();
        let nf = formulae.len();
        let group_ok = |d: usize, range: std::ops::Range<usize>| {
            if range.is_empty() {
                return true;
            }
            let mut hits = range.clone().map(|t| tfs[t][d] > 0);
            if any {
                hits.any(|h| h)
            } else {
                hits.all(|h| h)
            }
        };
        let mut out = Vec::new();
        for d in 0..n {
            if !(group_ok(d, 0..nf) && group_ok(d, nf..tfs.len())) {
                continue;
            }
            let mut score = 0.0;
            for t in &tfs {
                if t[d] > 0 {
                    let df = t.iter().filter(|&&x| x > 0).count();
                    score += (1.0 + (t[d] as f64).ln()) * (1.0 + n as f64 / df as f64).ln();
                }
            }
            out.push((self.docs[d].0.clone(), score));
        }
        out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        out.truncate(limit);
        out
    }
}

/// Random small corpus over a tiny vocabulary so that terms collide often.
pub fn random_corpus(rng: &mut impl Rng, max_docs: usize) -> Vec<(String, String)> {
    const WORDS: [&str; 5] = ["alpha", "beta", "gamma", "delta", "eps"];
    const FORMULAE: [&str; 3] = ["x^2", "a+b", "E=mc^2"];
    let n = rng.gen_range(0..=max_docs);
    (0..n)
        .map(|i| {
            let len = rng.gen_range(0..10);
            let parts: Vec<String> = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        format!("${}$", FORMULAE.choose(rng).unwrap())
                    } else {
                        WORDS.choose(rng).unwrap().to_string()
                    }
                })
                .collect();
            (format!("d{i:02}"), parts.join(" "))
        })
        .collect()
}

/// Random query string: up to 2 formulae and 3 keywords, some of them phrases.
pub fn random_query(rng: &mut impl Rng) -> String {
    const WORDS: [&str; 5] = ["alpha", "beta", "gamma", "delta", "eps"];
    const FORMULAE: [&str; 3] = ["x^2", "a+b", "E=mc^2"];
    loop {
        let f = rng.gen_range(0..=2);
        let k = rng.gen_range(0..=3);
        if f + k == 0 {
            continue;
        }
        let mut parts: Vec<String> = (0..f).map(|_| format!("${}$", FORMULAE.choose(rng).unwrap())).collect();
        for _ in 0..k {
            if rng.gen_bool(0.3) {
                parts.push(format!(
                    "\"{} {}\"",
                    WORDS.choose(rng).unwrap(),
                    WORDS.choose(rng).unwrap()
                ));
            } else {
                parts.push(WORDS.choose(rng).unwrap().to_string());
            }
        }
        return parts.join(" ");
    }
}
