//! Deterministic synthetic corpora and topics for benchmarks and fixtures.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::index::RawDocument;
use crate::trec::Qrels;

fn word(i: usize) -> String {
    const SYLLABLES: [&str; 16] = [
        "ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "pa", "qu", "di", "fo", "ge", "hu", "ja",
    ];
    let mut w = String::new();
    let mut n = i + 16;
    while n > 0 {
        w.push_str(SYLLABLES[n % 16]);
        n /= 16;
    }
    w
}

fn formula(i: usize) -> String {
    format!("f_{{{i}}}(x)=x^{{{}}}+{}", i % 7 + 2, i % 5)
}

/// Skewed index in `0..n`: small indices are much more frequent.
fn skewed(rng: &mut impl Rng, n: usize) -> usize {
    let u: f64 = rng.gen();
    ((u * u * u) * n as f64) as usize
}

pub struct SyntheticSpec {
    pub docs: usize,
    pub topics: usize,
    pub vocabulary: usize,
    pub formulae: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            docs: 10_000,
            topics: 50,
            vocabulary: 3_000,
            formulae: 400,
            seed: 11,
        }
    }
}

/// A corpus of `docs` documents with skewed word and formula frequencies, and
/// `topics` topic lines (two formulae, three keywords each).
pub fn generate(spec: &SyntheticSpec) -> (Vec<RawDocument>, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let docs = (0..spec.docs)
        .map(|d| {
            let len = rng.gen_range(20..80);
            let mut words: Vec<String> = (0..len).map(|_| word(skewed(&mut rng, spec.vocabulary))).collect();
            for _ in 0..rng.gen_range(0..4) {
                let at = rng.gen_range(0..=words.len());
                words.insert(at, format!("${}$", formula(skewed(&mut rng, spec.formulae))));
            }
            RawDocument::new(format!("doc{d:06}"), words.join(" "))
        })
        .collect();

    let mut topics = String::new();
    for t in 0..spec.topics {
        let f: Vec<String> = (0..2)
            .map(|_| format!("${}$", formula(rng.gen_range(0..spec.formulae / 8))))
            .collect();
        let k: Vec<String> = (0..3).map(|_| word(rng.gen_range(0..spec.vocabulary / 10))).collect();
        let _ = writeln!(topics, "S{t:03}\t{} {}", f.join(" "), k.join(" "));
    }
    (docs, topics)
}

/// Small judged collection in which part of the relevant material only
/// matches relaxed forms of each topic's query.
pub struct Fixture {
    pub corpus: Vec<RawDocument>,
    pub topics: String,
    pub qrels: Qrels,
}

struct TopicSpec {
    formulae: [&'static str; 2],
    keywords: [&'static str; 3],
}

const FIXTURE_TOPICS: [TopicSpec; 5] = [
    TopicSpec {
        formulae: ["a^2+b^2=c^2", "c=\\sqrt{a^2+b^2}"],
        keywords: ["\"right triangle\"", "hypotenuse", "proof"],
    },
    TopicSpec {
        formulae: ["E=mc^2", "p=mv"],
        keywords: ["relativity", "momentum", "\"rest mass\""],
    },
    TopicSpec {
        formulae: ["\\int_0^1 x^n dx", "\\frac{1}{n+1}"],
        keywords: ["integral", "polynomial", "bound"],
    },
    TopicSpec {
        formulae: ["e^{i\\pi}+1=0", "e^{ix}=\\cos x+i\\sin x"],
        keywords: ["euler", "\"complex exponential\"", "identity"],
    },
    TopicSpec {
        formulae: ["\\sum_{k=1}^n k", "\\frac{n(n+1)}{2}"],
        keywords: ["\"arithmetic series\"", "induction", "gauss"],
    },
];

const FILLER: [&str; 24] = [
    "the", "we", "show", "that", "result", "section", "paper", "consider", "case", "given", "where", "method",
    "follows", "lemma", "thus", "hence", "note", "value", "function", "set", "example", "general", "theorem", "study",
];

/// label, grade (None = unjudged), formula indices, keyword indices
type Profile = (&'static str, Option<u8>, &'static [usize], &'static [usize]);

/// Kinds of documents generated for each topic and which query parts they contain.
const PROFILES: [Profile; 10] = [
    ("full", Some(4), &[0, 1], &[0, 1, 2]),
    ("full", Some(3), &[0, 1], &[0, 1, 2]),
    ("full-nonrel", Some(0), &[0, 1], &[0, 1, 2]),
    ("math-k1", Some(2), &[0, 1], &[0]),
    ("math-k1k2", Some(3), &[0, 1], &[0, 1]),
    ("f1-text", Some(2), &[0], &[0, 1, 2]),
    ("text", Some(1), &[], &[0, 1, 2]),
    ("text-nonrel", Some(0), &[], &[0, 1, 2]),
    ("math-only", Some(2), &[0, 1], &[]),
    ("partial", None, &[1], &[2]),
];

/// The judged fixture: 5 topics x 20 documents.
pub fn fixture() -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(2015);
    let mut corpus = Vec::new();
    let mut topics = String::new();
    let mut qrels = Qrels::default();

    for (t, spec) in FIXTURE_TOPICS.iter().enumerate() {
        let topic_id = format!("F{}", t + 1);
        let raw: Vec<String> = spec
            .formulae
            .iter()
            .map(|f| format!("${f}$"))
            .chain(spec.keywords.iter().map(|k| k.to_string()))
            .collect();
        let _ = writeln!(topics, "{topic_id}\t{}", raw.join(" "));

        let mut n = 0;
        let mut emit = |parts: Vec<String>, grade: Option<u8>, rng: &mut ChaCha8Rng| {
            n += 1;
            let doc_id = format!("{topic_id}-d{n:02}");
            let mut words = parts;
            for _ in 0..rng.gen_range(6..14) {
                words.push(FILLER.choose(rng).unwrap().to_string());
            }
            words.shuffle(rng);
            corpus.push(RawDocument::new(doc_id.clone(), words.join(" ")));
            if let Some(g) = grade {
                qrels.insert(&topic_id, &doc_id, g).expect("fresh judgment");
            }
        };

        // Two passes over the profiles give 20 documents per topic.
        for _ in 0..2 {
            for (_, grade, formulae, keywords) in PROFILES {
                let mut parts = Vec::new();
                for &i in formulae {
                    for _ in 0..rng.gen_range(1..3) {
                        parts.push(format!("${}$", spec.formulae[i]));
                    }
                }
                for &i in keywords {
                    for _ in 0..rng.gen_range(1..3) {
                        parts.push(spec.keywords[i].trim_matches('"').to_string());
                    }
                }
                emit(parts, grade, &mut rng);
            }
        }
    }
    Fixture { corpus, topics, qrels }
}
