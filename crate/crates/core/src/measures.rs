//! Occupancy measures computed straight from the database: uo, ruo, luo and
//! rruo. These are the reference semantics; the list structures reproduce them
//! incrementally.

use crate::error::{Error, Result};
use crate::model::{
    Pattern, RevisedDatabase, RevisedTransaction, TotalOrder, Transaction, TransactionDatabase,
};

/// u(X, T) / tu(T).
pub fn uo_in_transaction(pattern: &Pattern, t: &Transaction) -> Result<f64> {
    let mut utility = 0.0;
    for &item in pattern.items() {
        let entry = t.entry(item).ok_or(Error::NotSupporting { tid: t.tid })?;
        utility += entry.utility;
    }
    Ok(utility / t.tu)
}

/// Mean of [`uo_in_transaction`] over the supporting transactions.
pub fn uo_of_pattern(pattern: &Pattern, db: &TransactionDatabase) -> Result<f64> {
    mean_over_support(
        db.transactions()
            .iter()
            .filter(|t| pattern.items().iter().all(|&i| t.contains(i)))
            .map(|t| uo_in_transaction(pattern, t)),
    )
}

fn mean_over_support(values: impl Iterator<Item = Result<f64>>) -> Result<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for v in values {
        sum += v?;
        n += 1;
    }
    if n == 0 {
        return Err(Error::ZeroSupport);
    }
    Ok(sum / n as f64)
}

/// Highest rank of the pattern, after checking that every item is present in `t`.
fn last_rank_in(pattern: &Pattern, t: &RevisedTransaction, order: &TotalOrder) -> Result<u32> {
    let mut last = None;
    for &item in pattern.items() {
        let e = t
            .entry(item, order)
            .ok_or(Error::NotSupporting { tid: t.tid })?;
        last = last.max(Some(e.rank));
    }
    last.ok_or(Error::NotSupporting { tid: t.tid })
}

fn supports(pattern: &Pattern, t: &RevisedTransaction, order: &TotalOrder) -> bool {
    pattern.items().iter().all(|&i| t.entry(i, order).is_some())
}

/// Occupancy of all items ranked after the pattern in `t`.
pub fn ruo_in_transaction(
    pattern: &Pattern,
    t: &RevisedTransaction,
    order: &TotalOrder,
) -> Result<f64> {
    let last = last_rank_in(pattern, t, order)?;
    let rest: f64 = t
        .entries()
        .iter()
        .filter(|e| e.rank > last)
        .map(|e| e.utility)
        .sum();
    Ok(rest / t.tu)
}

pub fn ruo_of_pattern(pattern: &Pattern, db: &RevisedDatabase, order: &TotalOrder) -> Result<f64> {
    mean_over_support(
        db.transactions()
            .iter()
            .filter(|t| supports(pattern, t, order))
            .map(|t| ruo_in_transaction(pattern, t, order)),
    )
}

/// The `maxlen - |X|` largest single-item occupancies among items after X,
/// in descending order. Returns all of them when fewer are available.
pub fn luo_in_transaction(
    pattern: &Pattern,
    t: &RevisedTransaction,
    order: &TotalOrder,
    maxlen: usize,
) -> Result<Vec<f64>> {
    let last = last_rank_in(pattern, t, order)?;
    let extend = maxlen.saturating_sub(pattern.len());
    let mut values: Vec<f64> = t
        .entries()
        .iter()
        .filter(|e| e.rank > last)
        .map(|e| e.utility / t.tu)
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values.truncate(extend);
    Ok(values)
}

pub fn rruo_in_transaction(
    pattern: &Pattern,
    t: &RevisedTransaction,
    order: &TotalOrder,
    maxlen: usize,
) -> Result<f64> {
    Ok(luo_in_transaction(pattern, t, order, maxlen)?.iter().sum())
}

pub fn rruo_of_pattern(
    pattern: &Pattern,
    db: &RevisedDatabase,
    order: &TotalOrder,
    maxlen: usize,
) -> Result<f64> {
    mean_over_support(
        db.transactions()
            .iter()
            .filter(|t| supports(pattern, t, order))
            .map(|t| rruo_in_transaction(pattern, t, order, maxlen)),
    )
}
