use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unbalanced delimiter `{0}` in query")]
    UnbalancedDelimiter(char),
    #[error("query contains no terms")]
    EmptyQuery,
    #[error("mask shape {got_formulae}-{got_keywords} does not match query shape {want_formulae}-{want_keywords}")]
    MaskShapeMismatch {
        got_formulae: usize,
        got_keywords: usize,
        want_formulae: usize,
        want_keywords: usize,
    },
    #[error("mask selects no terms")]
    EmptyMask,
    #[error("invalid mask string `{0}`")]
    InvalidMask(String),
    #[error("strategy needs a non-empty {0} group")]
    EmptyGroup(&'static str),
    #[error("query has {0} terms, more than the {max} allowed for all-subqueries expansion", max = crate::expansion::APS_MAX_TERMS)]
    TooManyTerms(usize),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("duplicate document id `{0}`")]
    DuplicateDocId(String),
    #[error("malformed document `{doc_id}`: {reason}")]
    MalformedDocument { doc_id: String, reason: String },
    #[error("subquery is empty")]
    EmptySubquery,
    #[error("topic `{0}` has no relevant judgments")]
    NoRelevantJudgments(String),
    #[error("no topic with relevant judgments appears in the run")]
    NoEvaluableTopics,
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("invalid run for topic `{topic}`: {reason}")]
    InvalidRun { topic: String, reason: String },
    #[error("duplicate judgment for topic `{topic}`, document `{doc_id}`")]
    DuplicateJudgment { topic: String, doc_id: String },
}
