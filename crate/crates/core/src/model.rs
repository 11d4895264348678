//! Transaction database model: items, transactions, unit utilities, support
//! counting, the support-ascending total order and the revised database.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Transaction identifier. Assigned 1, 2, 3, ... in storage order.
pub type Tid = u32;

/// Dense internal item identifier. Ids are handed out in ascending label order,
/// so comparing ids is the same as comparing labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Compares labels numerically when both are non-negative integers, otherwise
/// as strings. Integers sort before arbitrary tokens.
pub fn compare_labels(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Bidirectional mapping between item labels and dense ids.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    labels: Vec<String>,
    index: HashMap<String, ItemId>,
}

impl SymbolTable {
    /// Builds a table whose ids follow [`compare_labels`] order.
    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels
            .into_iter()
            .map(Into::into)
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        labels.sort_by(|a, b| compare_labels(a, b));
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), ItemId(i as u32)))
            .collect();
        SymbolTable { labels, index }
    }

    pub fn id(&self, label: &str) -> Option<ItemId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, item: ItemId) -> &str {
        &self.labels[item.index()]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// External (unit) utility of every item, indexed by [`ItemId`].
#[derive(Clone, Debug, Default)]
pub struct UtilityTable {
    unit: Vec<Option<f64>>,
}

impl UtilityTable {
    pub fn unit_utility(&self, item: ItemId) -> Option<f64> {
        self.unit.get(item.index()).copied().flatten()
    }
}

/// One purchased item inside a transaction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry {
    pub item: ItemId,
    /// Internal utility (purchase quantity), always >= 1.
    pub quantity: u32,
    /// quantity x unit utility.
    pub utility: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transaction {
    pub tid: Tid,
    /// Sorted by item id, at most one entry per item.
    entries: Vec<Entry>,
    /// Utility of the whole original transaction.
    pub tu: f64,
}

impl Transaction {
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn entry(&self, item: ItemId) -> Option<&Entry> {
        self.entries
            .binary_search_by_key(&item, |e| e.item)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.entry(item).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Sum of quantity x unit utility over the given entries.
pub fn compute_tu(
    entries: &[(ItemId, u32)],
    table: &UtilityTable,
    symbols: &SymbolTable,
) -> Result<f64> {
    entries.iter().try_fold(0.0, |acc, &(item, quantity)| {
        let eu = table
            .unit_utility(item)
            .ok_or_else(|| Error::MissingUtility {
                item: symbols.label(item).to_string(),
            })?;
        Ok(acc + quantity as f64 * eu)
    })
}

/// A transaction as it comes out of a parser, before ids are assigned.
#[derive(Clone, Debug, Default)]
pub struct RawTransaction {
    /// Source line, used in error messages.
    pub line: usize,
    pub entries: Vec<(String, u32)>,
    /// Declared transaction utility; computed from the entries when absent.
    pub tu: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct TransactionDatabase {
    transactions: Vec<Transaction>,
    utility_table: UtilityTable,
    symbols: SymbolTable,
}

impl TransactionDatabase {
    /// Assigns item ids, attaches utilities and computes each `tu`.
    pub fn build(raw: Vec<RawTransaction>, unit_utilities: &[(String, f64)]) -> Result<Self> {
        let symbols = SymbolTable::from_labels(
            raw.iter()
                .flat_map(|t| t.entries.iter().map(|(l, _)| l.as_str()))
                .chain(unit_utilities.iter().map(|(l, _)| l.as_str())),
        );

        let mut unit = vec![None; symbols.len()];
        for (label, eu) in unit_utilities {
            if eu.is_nan() || *eu <= 0.0 || !eu.is_finite() {
                return Err(Error::InvalidUtility {
                    item: label.clone(),
                    value: *eu,
                });
            }
            let id = symbols.id(label).expect("label registered above");
            unit[id.index()] = Some(*eu);
        }
        let utility_table = UtilityTable { unit };

        let mut transactions = Vec::with_capacity(raw.len());
        for (pos, raw_tx) in raw.into_iter().enumerate() {
            let mut ids: Vec<(ItemId, u32)> = Vec::with_capacity(raw_tx.entries.len());
            for (label, quantity) in &raw_tx.entries {
                if *quantity == 0 {
                    return Err(Error::parse(
                        raw_tx.line,
                        format!("item `{label}` has quantity 0"),
                    ));
                }
                ids.push((symbols.id(label).expect("registered"), *quantity));
            }
            ids.sort_unstable_by_key(|&(item, _)| item);
            if let Some(w) = ids.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::parse(
                    raw_tx.line,
                    format!("duplicate item `{}`", symbols.label(w[0].0)),
                ));
            }
            let computed = compute_tu(&ids, &utility_table, &symbols)?;
            let entries = ids
                .into_iter()
                .map(|(item, quantity)| Entry {
                    item,
                    quantity,
                    utility: quantity as f64
                        * utility_table.unit_utility(item).expect("checked by compute_tu"),
                })
                .collect();
            transactions.push(Transaction {
                tid: pos as Tid + 1,
                entries,
                tu: raw_tx.tu.unwrap_or(computed),
            });
        }

        Ok(TransactionDatabase {
            transactions,
            utility_table,
            symbols,
        })
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn transaction(&self, tid: Tid) -> Option<&Transaction> {
        tid.checked_sub(1)
            .and_then(|i| self.transactions.get(i as usize))
    }

    /// |D|, the number of transactions.
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn utility_table(&self) -> &UtilityTable {
        &self.utility_table
    }

    pub fn support_counts(&self) -> SupportCounts {
        support_counts(self)
    }

    /// Number of distinct items occurring in at least one transaction.
    pub fn vocabulary_size(&self) -> usize {
        self.support_counts().iter().filter(|(_, sc)| *sc > 0).count()
    }
}

/// SC(i) for every item, indexed by [`ItemId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCounts(Vec<usize>);

impl SupportCounts {
    pub fn get(&self, item: ItemId) -> usize {
        self.0.get(item.index()).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ItemId, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &sc)| (ItemId(i as u32), sc))
    }

    pub fn from_vec(counts: Vec<usize>) -> Self {
        SupportCounts(counts)
    }
}

pub fn support_counts(db: &TransactionDatabase) -> SupportCounts {
    let mut counts = vec![0usize; db.symbols.len()];
    for t in &db.transactions {
        for e in &t.entries {
            counts[e.item.index()] += 1;
        }
    }
    SupportCounts(counts)
}

/// ⌈alpha × |D|⌉, never below 1. The product is nudged down by 1e-9 before
/// rounding so that e.g. 0.3 × 10 is not rounded up to 4 by representation error.
pub fn min_support_count(alpha: f64, db_size: usize) -> usize {
    let raw = alpha * db_size as f64;
    ((raw - 1e-9).ceil() as usize).max(1)
}

/// Support-ascending order over the frequent items, ties by ascending item id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalOrder {
    items: Vec<ItemId>,
    rank: Vec<Option<u32>>,
}

impl TotalOrder {
    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn rank(&self, item: ItemId) -> Option<u32> {
        self.rank.get(item.index()).copied().flatten()
    }

    pub fn item_at(&self, rank: u32) -> ItemId {
        self.items[rank as usize]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.rank(item).is_some()
    }
}

pub fn build_total_order(counts: &SupportCounts, min_sup_count: usize) -> TotalOrder {
    let mut items: Vec<ItemId> = counts
        .iter()
        .filter(|&(_, sc)| sc >= min_sup_count && sc > 0)
        .map(|(item, _)| item)
        .collect();
    items.sort_by_key(|&item| (counts.get(item), item));
    let mut rank = vec![None; counts.0.len()];
    for (r, item) in items.iter().enumerate() {
        rank[item.index()] = Some(r as u32);
    }
    TotalOrder { items, rank }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MiningParams {
    /// Minimum support threshold, in (0, 1].
    pub alpha: f64,
    /// Minimum utility-occupancy threshold, in (0, 1].
    pub beta: f64,
    pub minlen: usize,
    /// `None` means unconstrained: the number of frequent items is used.
    pub maxlen: Option<usize>,
}

impl MiningParams {
    pub fn new(alpha: f64, beta: f64, minlen: usize, maxlen: usize) -> Result<Self> {
        let params = MiningParams {
            alpha,
            beta,
            minlen,
            maxlen: Some(maxlen),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn unconstrained(alpha: f64, beta: f64, minlen: usize) -> Result<Self> {
        let params = MiningParams {
            alpha,
            beta,
            minlen,
            maxlen: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "minimum support {} is outside (0, 1]",
                self.alpha
            )));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "minimum utility-occupancy {} is outside (0, 1]",
                self.beta
            )));
        }
        if self.minlen < 1 {
            return Err(Error::InvalidParams("minlen must be at least 1".into()));
        }
        if let Some(maxlen) = self.maxlen {
            if maxlen < self.minlen {
                return Err(Error::InvalidParams(format!(
                    "maxlen {maxlen} is smaller than minlen {}",
                    self.minlen
                )));
            }
        }
        Ok(())
    }

    pub fn min_support_count(&self, db_size: usize) -> usize {
        min_support_count(self.alpha, db_size)
    }

    /// Concrete maximum length given the number of frequent items.
    pub fn resolved_maxlen(&self, frequent_items: usize) -> usize {
        self.maxlen
            .unwrap_or_else(|| frequent_items.max(self.minlen))
    }
}

/// An itemset. Canonical patterns list their items in ≺ order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    items: Vec<ItemId>,
}

impl Pattern {
    /// Wraps items that are already in canonical order.
    pub fn new(items: Vec<ItemId>) -> Self {
        Pattern { items }
    }

    /// Sorts `items` by rank; `None` if an item is not in the order or repeats.
    pub fn canonical(mut items: Vec<ItemId>, order: &TotalOrder) -> Option<Self> {
        if items.iter().any(|&i| !order.contains(i)) {
            return None;
        }
        items.sort_by_key(|&i| order.rank(i));
        if items.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Pattern { items })
    }

    /// Builds a canonical pattern from labels.
    pub fn from_labels(labels: &[&str], symbols: &SymbolTable, order: &TotalOrder) -> Option<Self> {
        let items = labels
            .iter()
            .map(|l| symbols.id(l))
            .collect::<Option<Vec<_>>>()?;
        Pattern::canonical(items, order)
    }

    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn last(&self) -> Option<ItemId> {
        self.items.last().copied()
    }

    pub fn extended(&self, item: ItemId) -> Pattern {
        let mut items = Vec::with_capacity(self.items.len() + 1);
        items.extend_from_slice(&self.items);
        items.push(item);
        Pattern { items }
    }

    pub fn starts_with(&self, prefix: &Pattern) -> bool {
        self.items.starts_with(&prefix.items)
    }

    /// Ranks of the items; used as the canonical sort key.
    pub fn ranks(&self, order: &TotalOrder) -> Vec<Option<u32>> {
        self.items.iter().map(|&i| order.rank(i)).collect()
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> PatternDisplay<'a> {
        PatternDisplay {
            pattern: self,
            symbols,
        }
    }
}

pub struct PatternDisplay<'a> {
    pattern: &'a Pattern,
    symbols: &'a SymbolTable,
}

impl fmt::Display for PatternDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &item) in self.pattern.items.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.symbols.label(item))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RevisedEntry {
    pub item: ItemId,
    pub rank: u32,
    pub utility: f64,
}

/// A transaction restricted to frequent items, sorted by ≺. `tu` still refers
/// to the full original transaction.
#[derive(Clone, Debug, PartialEq)]
pub struct RevisedTransaction {
    pub tid: Tid,
    pub tu: f64,
    entries: Vec<RevisedEntry>,
}

impl RevisedTransaction {
    pub fn entries(&self) -> &[RevisedEntry] {
        &self.entries
    }

    pub fn entry(&self, item: ItemId, order: &TotalOrder) -> Option<&RevisedEntry> {
        let rank = order.rank(item)?;
        self.entries
            .binary_search_by_key(&rank, |e| e.rank)
            .ok()
            .map(|i| &self.entries[i])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RevisedDatabase {
    transactions: Vec<RevisedTransaction>,
    db_size: usize,
}

impl RevisedDatabase {
    /// Transactions that kept at least one frequent item.
    pub fn transactions(&self) -> &[RevisedTransaction] {
        &self.transactions
    }

    /// Original |D|, including transactions dropped for having no frequent item.
    pub fn db_size(&self) -> usize {
        self.db_size
    }

    /// Re-applies `order` to an already revised database.
    pub fn revise(&self, order: &TotalOrder) -> RevisedDatabase {
        let transactions = self
            .transactions
            .iter()
            .filter_map(|t| {
                revise_entries(t.entries.iter().map(|e| (e.item, e.utility)), order).map(
                    |entries| RevisedTransaction {
                        tid: t.tid,
                        tu: t.tu,
                        entries,
                    },
                )
            })
            .collect();
        RevisedDatabase {
            transactions,
            db_size: self.db_size,
        }
    }
}

fn revise_entries(
    entries: impl Iterator<Item = (ItemId, f64)>,
    order: &TotalOrder,
) -> Option<Vec<RevisedEntry>> {
    let mut kept: Vec<RevisedEntry> = entries
        .filter_map(|(item, utility)| {
            order.rank(item).map(|rank| RevisedEntry {
                item,
                rank,
                utility,
            })
        })
        .collect();
    if kept.is_empty() {
        return None;
    }
    kept.sort_unstable_by_key(|e| e.rank);
    Some(kept)
}

pub fn revise_database(db: &TransactionDatabase, order: &TotalOrder) -> RevisedDatabase {
    let transactions = db
        .transactions
        .iter()
        .filter_map(|t| {
            revise_entries(t.entries.iter().map(|e| (e.item, e.utility)), order).map(|entries| {
                RevisedTransaction {
                    tid: t.tid,
                    tu: t.tu,
                    entries,
                }
            })
        })
        .collect();
    RevisedDatabase {
        transactions,
        db_size: db.len(),
    }
}
