#![allow(dead_code)]

use huopm::io::{generate_synthetic, GeneratorSpec};
use huopm::{MiningParams, TransactionDatabase};

pub const FUZZ_DATABASES: u64 = 120;
pub const SETTINGS_PER_DATABASE: usize = 4;

/// Small seeded database: 3 to 12 items, 5 to 25 transactions.
pub fn small_spec(seed: u64) -> GeneratorSpec {
    let n_items = 3 + (seed % 10) as usize;
    let n_transactions = 5 + ((seed * 7) % 21) as usize;
    let avg = (2 + (seed % 4) as usize).min(n_items);
    GeneratorSpec::new(n_items, n_transactions, avg, 1000 + seed)
}

pub fn small_db(seed: u64) -> TransactionDatabase {
    generate_synthetic(&small_spec(seed)).expect("valid generator spec")
}

/// Every combination of the threshold grids.
pub fn full_grid() -> Vec<MiningParams> {
    let mut out = Vec::new();
    for a in 1..=5 {
        for b in 1..=8 {
            for maxlen in 1..=5 {
                for minlen in 1..=2usize.min(maxlen) {
                    out.push(MiningParams::new(a as f64 / 10.0, b as f64 / 10.0, minlen, maxlen).unwrap());
                }
            }
        }
    }
    out
}

/// Fuzz cases: each database with a few settings drawn from the grids.
pub fn fuzz_cases() -> Vec<(u64, TransactionDatabase, Vec<MiningParams>)> {
    let grid = full_grid();
    (0..FUZZ_DATABASES)
        .map(|seed| {
            let settings = (0..SETTINGS_PER_DATABASE)
                .map(|i| grid[((seed as usize) * 37 + i * 101) % grid.len()])
                .collect();
            (seed, small_db(seed), settings)
        })
        .collect()
}

pub fn labels(db: &TransactionDatabase, p: &huopm::Pattern) -> String {
    p.display(db.symbols()).to_string()
}
