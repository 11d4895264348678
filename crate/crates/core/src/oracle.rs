//! Brute-force reference miner. Enumerates itemsets depth-first with exact
//! tid-set support and recomputes every uo from the raw database.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::measures::uo_of_pattern;
use crate::model::{build_total_order, MiningParams, Pattern, TotalOrder, TransactionDatabase};
use crate::search::{sort_results, HuopResult};

/// Largest item vocabulary the oracle enumerates unless overridden.
pub const DEFAULT_ITEM_CAP: usize = 25;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub params: MiningParams,
    /// Longest itemset enumerated; `None` follows the params (all frequent
    /// items when unconstrained).
    pub max_enum_len: Option<usize>,
    pub item_cap: usize,
}

impl OracleConfig {
    pub fn new(params: MiningParams) -> Self {
        OracleConfig {
            params,
            max_enum_len: None,
            item_cap: DEFAULT_ITEM_CAP,
        }
    }

    pub fn item_cap(mut self, cap: usize) -> Self {
        self.item_cap = cap;
        self
    }

    pub fn mine(&self, db: &TransactionDatabase) -> Result<Vec<HuopResult>> {
        self.params.validate()?;
        check_guard(db, self.item_cap)?;
        let min_sup_count = self.params.min_support_count(db.len());
        let order = build_total_order(&db.support_counts(), min_sup_count);
        let maxlen = self.params.resolved_maxlen(order.len());
        let enum_len = self.max_enum_len.unwrap_or(maxlen);
        if enum_len < maxlen {
            return Err(Error::InvalidParams(format!(
                "enumeration length {enum_len} is below maxlen {maxlen}"
            )));
        }

        let mut results = Vec::new();
        for (pattern, sup) in enumerate(db, &order, min_sup_count, maxlen) {
            if pattern.len() < self.params.minlen {
                continue;
            }
            let uo = uo_of_pattern(&pattern, db)?;
            if uo >= self.params.beta {
                results.push(HuopResult { pattern, sup, uo });
            }
        }
        sort_results(&mut results, &order);
        Ok(results)
    }
}

/// Differences between two result sets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Comparison {
    pub matched: usize,
    pub only_left: Vec<HuopResult>,
    pub only_right: Vec<HuopResult>,
    /// Same pattern, different support or uo beyond the tolerance.
    pub disagreements: Vec<(HuopResult, HuopResult)>,
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty() && self.disagreements.is_empty()
    }
}

/// Set comparison keyed by pattern: supports must be equal and uo within `tol`.
pub fn compare_results(left: &[HuopResult], right: &[HuopResult], tol: f64) -> Comparison {
    let mut by_pattern: BTreeMap<&Pattern, &HuopResult> =
        right.iter().map(|r| (&r.pattern, r)).collect();
    let mut cmp = Comparison::default();
    for l in left {
        match by_pattern.remove(&l.pattern) {
            Some(r) if r.sup == l.sup && (r.uo - l.uo).abs() <= tol => cmp.matched += 1,
            Some(r) => cmp.disagreements.push((l.clone(), r.clone())),
            None => cmp.only_left.push(l.clone()),
        }
    }
    cmp.only_right = by_pattern.into_values().cloned().collect();
    cmp
}

fn check_guard(db: &TransactionDatabase, cap: usize) -> Result<()> {
    let items = db.vocabulary_size();
    if items > cap {
        return Err(Error::EnumerationGuard { items, cap });
    }
    Ok(())
}

/// Every itemset of length <= `max_len` occurring at least once, with its
/// exact support count. Patterns are canonical under the support-ascending
/// order of all items.
pub fn enumerate_supported(
    db: &TransactionDatabase,
    max_len: usize,
    item_cap: usize,
) -> Result<Vec<(Pattern, usize)>> {
    check_guard(db, item_cap)?;
    let order = build_total_order(&db.support_counts(), 1);
    Ok(enumerate(db, &order, 1, max_len))
}

/// HUOPs by exhaustive enumeration with the default item cap.
pub fn brute_force_mine(db: &TransactionDatabase, params: &MiningParams) -> Result<Vec<HuopResult>> {
    OracleConfig::new(*params).mine(db)
}

fn enumerate(
    db: &TransactionDatabase,
    order: &TotalOrder,
    min_sup: usize,
    max_len: usize,
) -> Vec<(Pattern, usize)> {
    // tid lists (transaction indices) per ranked item
    let mut tidsets: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (idx, t) in db.transactions().iter().enumerate() {
        for e in t.entries() {
            if let Some(rank) = order.rank(e.item) {
                tidsets[rank as usize].push(idx);
            }
        }
    }

    let mut out = Vec::new();
    let mut stack = Vec::new();
    for rank in 0..order.len() {
        grow(
            order,
            &tidsets,
            rank,
            &tidsets[rank],
            min_sup,
            max_len,
            &mut stack,
            &mut out,
        );
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn grow(
    order: &TotalOrder,
    tidsets: &[Vec<usize>],
    rank: usize,
    tids: &[usize],
    min_sup: usize,
    max_len: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<(Pattern, usize)>,
) {
    if tids.len() < min_sup.max(1) || stack.len() >= max_len {
        return;
    }
    stack.push(rank);
    out.push((
        Pattern::new(stack.iter().map(|&r| order.item_at(r as u32)).collect()),
        tids.len(),
    ));
    for next in rank + 1..order.len() {
        let joined = intersect(tids, &tidsets[next]);
        grow(order, tidsets, next, &joined, min_sup, max_len, stack, out);
    }
    stack.pop();
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
