//! Subquery plans: which relaxed subqueries to run for a query, in which
//! order, and how wide a strip of hits each contributes when merged.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{apply_mask, Query, Subquery, SubqueryMask};

/// Largest query (formulae + keywords) accepted by [`expand_aps`].
pub const APS_MAX_TERMS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Original query only.
    Oqo,
    /// Math terms only.
    Mto,
    /// Text terms only.
    Tto,
    /// Leave rightmost out.
    Lro,
    /// Leave one out.
    Loo,
    /// Leave one or two out.
    Looto,
    /// All possible subqueries.
    Aps,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::Oqo,
        Strategy::Mto,
        Strategy::Tto,
        Strategy::Lro,
        Strategy::Loo,
        Strategy::Looto,
        Strategy::Aps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Oqo => "oqo",
            Strategy::Mto => "mto",
            Strategy::Tto => "tto",
            Strategy::Lro => "lro",
            Strategy::Loo => "loo",
            Strategy::Looto => "looto",
            Strategy::Aps => "aps",
        }
    }

    pub fn expand(self, query: &Query) -> Result<SubqueryPlan> {
        match self {
            Strategy::Oqo => Ok(expand_oqo(query)),
            Strategy::Mto => expand_mto(query),
            Strategy::Tto => expand_tto(query),
            Strategy::Lro => Ok(expand_lro(query)),
            Strategy::Loo => Ok(expand_loo(query)),
            Strategy::Looto => Ok(expand_looto(query)),
            Strategy::Aps => expand_aps(query),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub subquery: Subquery,
    pub strip_width: usize,
    pub mask_weight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubqueryPlan {
    pub strategy: Strategy,
    pub entries: Vec<PlanEntry>,
}

impl SubqueryPlan {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn masks(&self) -> impl Iterator<Item = &SubqueryMask> {
        self.entries.iter().map(|e| &e.subquery.mask)
    }
}

/// Two points per included formula, one per included keyword.
pub fn mask_weight(mask: &SubqueryMask) -> usize {
    2 * mask.formulae_set() + mask.keywords_set()
}

fn entry(query: &Query, mask: &SubqueryMask, strip_width: usize) -> PlanEntry {
    // Masks are generated here with the query's own shape and never empty.
    let subquery = apply_mask(query, mask).expect("plan mask fits its query");
    PlanEntry {
        mask_weight: mask_weight(mask),
        subquery,
        strip_width,
    }
}

fn single(strategy: Strategy, query: &Query, mask: SubqueryMask) -> SubqueryPlan {
    SubqueryPlan {
        strategy,
        entries: vec![entry(query, &mask, 1)],
    }
}

/// Heavier masks first; equal weights ordered by bit string, descending.
fn by_weight_desc(a: &SubqueryMask, b: &SubqueryMask) -> Ordering {
    mask_weight(b).cmp(&mask_weight(a)).then_with(|| b.cmp_bits(a))
}

pub fn expand_oqo(query: &Query) -> SubqueryPlan {
    single(Strategy::Oqo, query, query.full_mask())
}

pub fn expand_mto(query: &Query) -> Result<SubqueryPlan> {
    if query.formulae.is_empty() {
        return Err(Error::EmptyGroup("formula"));
    }
    let mask = SubqueryMask {
        formula_bits: vec![true; query.formula_count()],
        keyword_bits: vec![false; query.keyword_count()],
    };
    Ok(single(Strategy::Mto, query, mask))
}

pub fn expand_tto(query: &Query) -> Result<SubqueryPlan> {
    if query.keywords.is_empty() {
        return Err(Error::EmptyGroup("keyword"));
    }
    let mask = SubqueryMask {
        formula_bits: vec![false; query.formula_count()],
        keyword_bits: vec![true; query.keyword_count()],
    };
    Ok(single(Strategy::Tto, query, mask))
}

/// Original query, then keywords dropped from the right down to the formulae
/// alone, then (keywords restored) formulae dropped from the right down to the
/// keywords alone. When one group is empty the other is shortened from the
/// right, stopping before the empty subquery. Strip widths run n, n-1, ..., 1.
pub fn expand_lro(query: &Query) -> SubqueryPlan {
    let (f, k) = (query.formula_count(), query.keyword_count());
    let mut masks = vec![query.full_mask()];

    if f > 0 && k > 0 {
        for kept in (0..k).rev() {
            let mut m = query.full_mask();
            m.keyword_bits[kept..].iter_mut().for_each(|b| *b = false);
            masks.push(m);
        }
        for kept in (0..f).rev() {
            let mut m = query.full_mask();
            m.formula_bits[kept..].iter_mut().for_each(|b| *b = false);
            masks.push(m);
        }
    } else {
        let n = f + k;
        for kept in (1..n).rev() {
            let mut m = query.full_mask();
            let bits = if f > 0 {
                &mut m.formula_bits
            } else {
                &mut m.keyword_bits
            };
            bits[kept..].iter_mut().for_each(|b| *b = false);
            masks.push(m);
        }
    }

    let n = masks.len();
    SubqueryPlan {
        strategy: Strategy::Lro,
        entries: masks.iter().enumerate().map(|(i, m)| entry(query, m, n - i)).collect(),
    }
}

/// All masks of the query's shape with exactly `removed` bits cleared.
fn masks_removing(query: &Query, removed: usize) -> Vec<SubqueryMask> {
    let n = query.term_count();
    let f = query.formula_count();
    let mut out = Vec::new();
    if removed >= n {
        return out;
    }
    let mut combo: Vec<usize> = (0..removed).collect();
    loop {
        let mut bits = vec![true; n];
        for &i in &combo {
            bits[i] = false;
        }
        out.push(SubqueryMask {
            formula_bits: bits[..f].to_vec(),
            keyword_bits: bits[f..].to_vec(),
        });
        // Advance to the next combination in lexicographic order.
        let Some(pos) = (0..removed).rev().find(|&i| combo[i] < n - removed + i) else {
            break;
        };
        combo[pos] += 1;
        for j in pos + 1..removed {
            combo[j] = combo[j - 1] + 1;
        }
    }
    out
}

/// Original first, then bands of subqueries with one, two, ... components
/// removed. Band `b` gets strip width `widths[b]`.
fn banded(strategy: Strategy, query: &Query, widths: &[usize]) -> SubqueryPlan {
    let entries = widths
        .iter()
        .enumerate()
        .flat_map(|(removed, &width)| {
            let mut masks = masks_removing(query, removed);
            masks.sort_by(by_weight_desc);
            masks
                .into_iter()
                .map(move |m| entry(query, &m, width))
                .collect::<Vec<_>>()
        })
        .collect();
    SubqueryPlan { strategy, entries }
}

pub fn expand_loo(query: &Query) -> SubqueryPlan {
    if query.term_count() < 2 {
        let mut plan = expand_oqo(query);
        plan.strategy = Strategy::Loo;
        return plan;
    }
    banded(Strategy::Loo, query, &[2, 1])
}

pub fn expand_looto(query: &Query) -> SubqueryPlan {
    if query.term_count() < 2 {
        let mut plan = expand_oqo(query);
        plan.strategy = Strategy::Looto;
        return plan;
    }
    banded(Strategy::Looto, query, &[3, 2, 1])
}

/// Every non-empty subquery, heaviest mask first, each with its mask weight
/// as strip width.
pub fn expand_aps(query: &Query) -> Result<SubqueryPlan> {
    let n = query.term_count();
    if n > APS_MAX_TERMS {
        return Err(Error::TooManyTerms(n));
    }
    let f = query.formula_count();
    let mut masks: Vec<SubqueryMask> = (1u32..1 << n)
        .map(|bits| {
            let all: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            SubqueryMask {
                formula_bits: all[..f].to_vec(),
                keyword_bits: all[f..].to_vec(),
            }
        })
        .collect();
    masks.sort_by(by_weight_desc);
    Ok(SubqueryPlan {
        strategy: Strategy::Aps,
        entries: masks.iter().map(|m| entry(query, m, mask_weight(m))).collect(),
    })
}

/// Reverses each group in place, keeping formulae and keywords apart.
pub fn reverse_query(query: &Query) -> Query {
    let mut q = query.clone();
    q.formulae.reverse();
    q.keywords.reverse();
    q
}
