//! Query relaxation and strip-merging for mixed formula/keyword search.
//!
//! A query of formulae and keywords is expanded into subqueries by one of
//! several strategies ([`expansion`]), each subquery is run against an
//! in-memory index ([`index`]), and the per-subquery rankings are interleaved
//! into one list ([`merging`]). [`evaluation`] scores the resulting TREC runs
//! with Bpref, MAP and P@k.

pub mod cli;
pub mod error;
pub mod evaluation;
pub mod expansion;
pub mod index;
pub mod merging;
pub mod model;
pub mod pipeline;
pub mod synthetic;
pub mod trec;

pub use error::{Error, Result};
pub use expansion::{Strategy, SubqueryPlan};
pub use index::{GroupMode, Index};
pub use merging::{strip_merge, MergedList};
pub use model::{parse_query, Query, ResultList, Subquery, SubqueryMask};
