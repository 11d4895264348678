//! Mining of high utility-occupancy patterns under minimum and maximum
//! pattern-length constraints.
//!
//! A pattern's utility-occupancy is the average share of transaction utility
//! it accounts for across the transactions containing it. [`search::Miner`]
//! finds every pattern whose support and utility-occupancy reach the given
//! thresholds and whose length lies in `[minlen, maxlen]`, pruning with a
//! length-aware upper bound computed from per-pattern UO-nlists.
//!
//! ```
//! use huopm::{fixtures::ex_db, mine, MiningParams};
//!
//! let db = ex_db();
//! let params = MiningParams::new(0.3, 0.3, 1, 3).unwrap();
//! let outcome = mine(&db, &params).unwrap();
//! assert_eq!(outcome.results.len(), 18);
//! ```

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod lists;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod search;

pub use error::{Error, Result};
pub use model::{MiningParams, Pattern, TransactionDatabase};
pub use search::{mine, HuopResult, Miner, MiningOutcome, SearchStats};
