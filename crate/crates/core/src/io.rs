//! Dataset readers and writers, the synthetic generator, and the result and
//! statistics writers.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{RawTransaction, SymbolTable, TransactionDatabase};
use crate::search::HuopResult;

/// Allowed gap between a declared SPMF transaction utility and its item sum.
pub const TU_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatasetFormat {
    /// `i1 i2 ... ik:TU:u1 u2 ... uk`, one transaction per line.
    SpmfUtility,
    /// `item:quantity` pairs per line plus a separate `item unit_utility` file.
    QuantityProfit,
}

fn lines<R: Read>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    BufReader::new(reader)
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(Error::from))
}

/// Reads the SPMF utility format. Each item's utility becomes its quantity
/// with unit utility 1, which leaves every occupancy value unchanged.
pub fn parse_spmf_utility<R: Read>(reader: R) -> Result<TransactionDatabase> {
    let mut raw = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for line in lines(reader) {
        let (no, line) = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with(['#', '%', '@']) {
            continue;
        }
        let mut fields = line.split(':');
        let (Some(items), Some(tu), Some(utils), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::parse(no, "expected `items:TU:utilities`"));
        };
        let items: Vec<&str> = items.split_whitespace().collect();
        let utils: Vec<&str> = utils.split_whitespace().collect();
        if items.len() != utils.len() {
            return Err(Error::parse(
                no,
                format!("{} items but {} utilities", items.len(), utils.len()),
            ));
        }
        if items.is_empty() {
            return Err(Error::parse(no, "transaction has no items"));
        }
        let declared: f64 = tu
            .trim()
            .parse()
            .map_err(|_| Error::parse(no, format!("bad transaction utility `{}`", tu.trim())))?;

        let mut entries = Vec::with_capacity(items.len());
        let mut sum = 0.0;
        for (item, util) in items.iter().zip(&utils) {
            item.parse::<u64>()
                .map_err(|_| Error::parse(no, format!("item `{item}` is not an integer")))?;
            let util: u32 = util
                .parse()
                .ok()
                .filter(|&u| u >= 1)
                .ok_or_else(|| {
                    Error::parse(no, format!("utility `{util}` is not a positive integer"))
                })?;
            sum += util as f64;
            entries.push((item.to_string(), util));
        }
        if (declared - sum).abs() > TU_TOLERANCE {
            return Err(Error::Consistency {
                line: no,
                declared,
                computed: sum,
            });
        }
        labels.extend(entries.iter().map(|(l, _)| l.clone()));
        raw.push(RawTransaction {
            line: no,
            entries,
            tu: Some(declared),
        });
    }
    labels.sort();
    labels.dedup();
    let unit: Vec<(String, f64)> = labels.into_iter().map(|l| (l, 1.0)).collect();
    TransactionDatabase::build(raw, &unit)
}

fn is_skippable(line: &str) -> bool {
    line.is_empty() || line.starts_with('#')
}

/// Reads `item:quantity` transaction lines and `item unit_utility` profit lines.
pub fn parse_quantity_profit<T: Read, P: Read>(
    transactions: T,
    profits: P,
) -> Result<TransactionDatabase> {
    let mut unit: Vec<(String, f64)> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for line in lines(profits) {
        let (no, line) = line?;
        let line = line.trim();
        if is_skippable(line) {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(item), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(no, "expected `item unit_utility`"));
        };
        let value: f64 = value
            .parse()
            .map_err(|_| Error::parse(no, format!("bad unit utility `{value}`")))?;
        if let Some(prev) = seen.insert(item.to_string(), no) {
            return Err(Error::parse(
                no,
                format!("item `{item}` already priced on line {prev}"),
            ));
        }
        unit.push((item.to_string(), value));
    }

    let mut raw = Vec::new();
    for line in lines(transactions) {
        let (no, line) = line?;
        let line = line.trim();
        if is_skippable(line) {
            continue;
        }
        let mut entries: Vec<(String, u32)> = Vec::new();
        for token in line.split_whitespace() {
            let Some((item, qty)) = token.rsplit_once(':') else {
                return Err(Error::parse(no, format!("expected `item:quantity`, got `{token}`")));
            };
            let qty: u32 = qty
                .parse()
                .map_err(|_| Error::parse(no, format!("bad quantity in `{token}`")))?;
            if qty < 1 {
                return Err(Error::parse(no, format!("quantity of `{item}` must be at least 1")));
            }
            if entries.iter().any(|(l, _)| l == item) {
                return Err(Error::parse(no, format!("duplicate item `{item}`")));
            }
            if !seen.contains_key(item) {
                return Err(Error::MissingUtility {
                    item: item.to_string(),
                });
            }
            entries.push((item.to_string(), qty));
        }
        raw.push(RawTransaction {
            line: no,
            entries,
            tu: None,
        });
    }
    TransactionDatabase::build(raw, &unit)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub n_items: usize,
    pub n_transactions: usize,
    pub avg_transaction_len: usize,
    pub max_quantity: u32,
    pub max_unit_utility: u32,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(n_items: usize, n_transactions: usize, avg_transaction_len: usize, seed: u64) -> Self {
        GeneratorSpec {
            n_items,
            n_transactions,
            avg_transaction_len,
            max_quantity: 5,
            max_unit_utility: 10,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_items == 0
            || self.n_transactions == 0
            || self.avg_transaction_len == 0
            || self.max_quantity == 0
            || self.max_unit_utility == 0
        {
            return Err(Error::InvalidParams("generator counts must be at least 1".into()));
        }
        if self.avg_transaction_len > self.n_items {
            return Err(Error::InvalidParams(format!(
                "average length {} exceeds the {} available items",
                self.avg_transaction_len, self.n_items
            )));
        }
        Ok(())
    }
}

/// Seeded random quantitative database. Items are labelled `1..=n_items`.
pub fn generate_synthetic(spec: &GeneratorSpec) -> Result<TransactionDatabase> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let unit: Vec<(String, f64)> = (1..=spec.n_items)
        .map(|i| (i.to_string(), rng.gen_range(1..=spec.max_unit_utility) as f64))
        .collect();
    let max_len = (2 * spec.avg_transaction_len - 1).min(spec.n_items);
    let raw = (0..spec.n_transactions)
        .map(|t| {
            let len = rng.gen_range(1..=max_len);
            let mut picked = sample(&mut rng, spec.n_items, len).into_vec();
            picked.sort_unstable();
            let entries = picked
                .into_iter()
                .map(|i| ((i + 1).to_string(), rng.gen_range(1..=spec.max_quantity)))
                .collect();
            RawTransaction {
                line: t + 1,
                entries,
                tu: None,
            }
        })
        .collect();
    TransactionDatabase::build(raw, &unit)
}

fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Writes the database as `item:quantity` lines plus an `item unit_utility` file.
pub fn write_quantity_profit<T: Write, P: Write>(
    db: &TransactionDatabase,
    mut transactions: T,
    mut profits: P,
) -> Result<()> {
    let symbols = db.symbols();
    for t in db.transactions() {
        let line: Vec<String> = t
            .entries()
            .iter()
            .map(|e| format!("{}:{}", symbols.label(e.item), e.quantity))
            .collect();
        writeln!(transactions, "{}", line.join(" "))?;
    }
    for i in 0..symbols.len() {
        let item = crate::model::ItemId(i as u32);
        if let Some(eu) = db.utility_table().unit_utility(item) {
            writeln!(profits, "{} {}", symbols.label(item), format_number(eu))?;
        }
    }
    transactions.flush()?;
    profits.flush()?;
    Ok(())
}

/// Writes the database in SPMF utility format. Labels must be integers.
pub fn write_spmf_utility<W: Write>(db: &TransactionDatabase, mut out: W) -> Result<()> {
    let symbols = db.symbols();
    for t in db.transactions() {
        let items: Vec<&str> = t.entries().iter().map(|e| symbols.label(e.item)).collect();
        let utils: Vec<String> = t.entries().iter().map(|e| format_number(e.utility)).collect();
        writeln!(
            out,
            "{}:{}:{}",
            items.join(" "),
            format_number(t.tu),
            utils.join(" ")
        )?;
    }
    out.flush()?;
    Ok(())
}

/// One line per pattern: `item1 item2 ... #SUP: s #UO: u` (u to 5 decimals).
pub fn write_results<W: Write>(
    results: &[HuopResult],
    symbols: &SymbolTable,
    mut out: W,
) -> Result<()> {
    for r in results {
        writeln!(
            out,
            "{} #SUP: {} #UO: {:.5}",
            r.pattern.display(symbols),
            r.sup,
            r.uo
        )?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsRow {
    pub dataset: String,
    pub alpha: f64,
    pub beta: f64,
    pub minlen: usize,
    /// 0 for an unconstrained run.
    pub maxlen: usize,
    pub runtime_ms: u64,
    pub visited_nodes: u64,
    pub constructions: u64,
    pub patterns: usize,
}

pub const STATS_HEADER: &str =
    "dataset,alpha,beta,minlen,maxlen,runtime_ms,visited_nodes,constructions,patterns";

pub fn write_stats_csv<W: Write>(rows: &[StatsRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(STATS_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
