//! Depth-first search of the set-enumeration tree with support gating,
//! length-aware upper-bound pruning and the maxlen recursion guard.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lists::{build_initial_nodes, construct, LuoInheritance, PatternNode, UoNList};
use crate::model::{
    build_total_order, revise_database, MiningParams, Pattern, TotalOrder, TransactionDatabase,
};

#[derive(Clone, Debug, PartialEq)]
pub struct HuopResult {
    pub pattern: Pattern,
    pub sup: usize,
    pub uo: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Nodes whose FUO-table was read by the search loop (1-items included).
    pub visited_nodes: u64,
    pub constructions: u64,
    /// Subtrees cut because the length upper bound fell below the threshold.
    pub lub_prunes: u64,
    /// Items or nodes dropped for insufficient support.
    pub support_prunes: u64,
    /// Joins abandoned by the running support bound.
    pub early_aborts: u64,
    pub runtime_ms: u64,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.visited_nodes += other.visited_nodes;
        self.constructions += other.constructions;
        self.lub_prunes += other.lub_prunes;
        self.support_prunes += other.support_prunes;
        self.early_aborts += other.early_aborts;
    }
}

/// Destination for discovered patterns.
pub trait ResultSink {
    fn accept(&mut self, result: HuopResult) -> Result<()>;
}

impl ResultSink for Vec<HuopResult> {
    fn accept(&mut self, result: HuopResult) -> Result<()> {
        self.push(result);
        Ok(())
    }
}

/// What the search saw at a node that passed the support gate.
#[derive(Clone, Debug)]
pub struct NodeVisit<'a> {
    pub pattern: &'a Pattern,
    pub sup: usize,
    pub uo: f64,
    pub bound: f64,
}

/// Mean of the `min_sup_count` largest values of `uo + rruo` over the tuples.
/// Every extension within the length limit has uo at most this value.
pub fn length_upper_bound(uonl: &UoNList, min_sup_count: usize) -> f64 {
    debug_assert!(min_sup_count >= 1);
    let mut values: Vec<f64> = uonl.tuples().iter().map(|t| t.uo + t.rruo()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let top: f64 = values.iter().take(min_sup_count).sum();
    top / min_sup_count as f64
}

/// Absorbs rounding in the bound so ties with β are never pruned.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
struct SearchConfig {
    beta: f64,
    minlen: usize,
    maxlen: usize,
    min_sup_count: usize,
    inheritance: LuoInheritance,
}

struct Search<'o> {
    cfg: SearchConfig,
    observer: Option<&'o mut dyn FnMut(&NodeVisit<'_>)>,
}

impl Search<'_> {
    /// Processes `exten[index]` under `prefix`: emission, bound, joins with the
    /// later siblings and recursion.
    fn visit(
        &mut self,
        prefix: Option<&PatternNode>,
        exten: &[PatternNode],
        index: usize,
        sink: &mut dyn ResultSink,
        stats: &mut SearchStats,
    ) -> Result<()> {
        let cfg = self.cfg;
        let xa = &exten[index];
        stats.visited_nodes += 1;
        if xa.fuot.sup < cfg.min_sup_count {
            stats.support_prunes += 1;
            return Ok(());
        }
        let len = xa.pattern.len();
        debug_assert!(len <= cfg.maxlen);
        if xa.fuot.uo >= cfg.beta && len >= cfg.minlen {
            sink.accept(HuopResult {
                pattern: xa.pattern.clone(),
                sup: xa.fuot.sup,
                uo: xa.fuot.uo,
            })?;
        }

        let bound = length_upper_bound(&xa.uonl, cfg.min_sup_count);
        if let Some(observe) = self.observer.as_mut() {
            observe(&NodeVisit {
                pattern: &xa.pattern,
                sup: xa.fuot.sup,
                uo: xa.fuot.uo,
                bound,
            });
        }
        if bound < cfg.beta - BOUND_SLACK {
            stats.lub_prunes += 1;
            return Ok(());
        }

        let mut children = Vec::new();
        for xb in &exten[index + 1..] {
            stats.constructions += 1;
            match construct(prefix, xa, xb, cfg.min_sup_count, cfg.inheritance)? {
                Some(node) if node.fuot.sup >= cfg.min_sup_count => children.push(node),
                Some(_) => stats.support_prunes += 1,
                None => stats.early_aborts += 1,
            }
        }
        let prefix_len = prefix.map_or(0, |p| p.pattern.len());
        if prefix_len + 2 <= cfg.maxlen {
            self.subtree(Some(xa), &children, sink, stats)?;
        }
        Ok(())
    }

    fn subtree(
        &mut self,
        prefix: Option<&PatternNode>,
        exten: &[PatternNode],
        sink: &mut dyn ResultSink,
        stats: &mut SearchStats,
    ) -> Result<()> {
        for index in 0..exten.len() {
            self.visit(prefix, exten, index, sink, stats)?;
        }
        Ok(())
    }
}

/// Runs the search below `prefix` over its one-item extensions `exten`
/// (ordered by ≺ of their last items).
pub fn search_subtree(
    prefix: Option<&PatternNode>,
    exten: &[PatternNode],
    params: &MiningParams,
    maxlen: usize,
    db_size: usize,
    sink: &mut dyn ResultSink,
    stats: &mut SearchStats,
) -> Result<()> {
    let mut search = Search {
        cfg: SearchConfig {
            beta: params.beta,
            minlen: params.minlen,
            maxlen,
            min_sup_count: params.min_support_count(db_size),
            inheritance: LuoInheritance::Verbatim,
        },
        observer: None,
    };
    search.subtree(prefix, exten, sink, stats)
}

/// Sorts by length, then by the ranks of the items under ≺.
pub fn sort_results(results: &mut [HuopResult], order: &TotalOrder) {
    results.sort_by_cached_key(|r| (r.pattern.len(), r.pattern.ranks(order)));
}

#[derive(Clone, Debug)]
pub struct MiningOutcome {
    pub results: Vec<HuopResult>,
    pub stats: SearchStats,
    pub order: TotalOrder,
    /// maxlen actually used (the number of frequent items when unconstrained).
    pub maxlen: usize,
    pub min_sup_count: usize,
}

/// Configured miner. `threads > 1` explores first-level subtrees in parallel;
/// output is identical to a sequential run.
#[derive(Clone, Copy, Debug)]
pub struct Miner {
    params: MiningParams,
    threads: usize,
    trim: bool,
}

impl Miner {
    pub fn new(params: MiningParams) -> Self {
        Miner {
            params,
            threads: 1,
            trim: false,
        }
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    /// Trim inherited luo lists to the joined pattern's remaining length.
    pub fn trim_inherited_luo(mut self, on: bool) -> Self {
        self.trim = on;
        self
    }

    pub fn params(&self) -> &MiningParams {
        &self.params
    }

    pub fn mine(&self, db: &TransactionDatabase) -> Result<MiningOutcome> {
        self.run(db, None)
    }

    /// Sequential run that reports every node passing the support gate.
    pub fn mine_observed(
        &self,
        db: &TransactionDatabase,
        observer: &mut dyn FnMut(&NodeVisit<'_>),
    ) -> Result<MiningOutcome> {
        self.run(db, Some(observer))
    }

    fn run(
        &self,
        db: &TransactionDatabase,
        observer: Option<&mut dyn FnMut(&NodeVisit<'_>)>,
    ) -> Result<MiningOutcome> {
        self.params.validate()?;
        if db.is_empty() {
            return Err(Error::InvalidParams("database has no transactions".into()));
        }
        let started = Instant::now();
        let mut stats = SearchStats::default();

        let min_sup_count = self.params.min_support_count(db.len());
        let counts = db.support_counts();
        let order = build_total_order(&counts, min_sup_count);
        stats.support_prunes += counts
            .iter()
            .filter(|&(_, sc)| sc > 0 && sc < min_sup_count)
            .count() as u64;
        let maxlen = self.params.resolved_maxlen(order.len());
        let inheritance = if self.trim {
            LuoInheritance::Trimmed { maxlen }
        } else {
            LuoInheritance::Verbatim
        };

        let revised = revise_database(db, &order);
        let initial = build_initial_nodes(&revised, &order, maxlen);

        let mut results = Vec::new();
        if maxlen >= 1 {
            let cfg = SearchConfig {
                beta: self.params.beta,
                minlen: self.params.minlen,
                maxlen,
                min_sup_count,
                inheritance,
            };
            if self.threads > 1 && observer.is_none() {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(self.threads)
                    .build()
                    .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
                let parts: Vec<Result<(Vec<HuopResult>, SearchStats)>> = pool.install(|| {
                    (0..initial.len())
                        .into_par_iter()
                        .map(|index| {
                            let mut local = Search { cfg, observer: None };
                            let mut found = Vec::new();
                            let mut local_stats = SearchStats::default();
                            local.visit(None, &initial, index, &mut found, &mut local_stats)?;
                            Ok((found, local_stats))
                        })
                        .collect()
                });
                for part in parts {
                    let (found, part_stats) = part?;
                    results.extend(found);
                    stats.absorb(&part_stats);
                }
            } else {
                let mut search = Search { cfg, observer };
                search.subtree(None, &initial, &mut results, &mut stats)?;
            }
        }

        sort_results(&mut results, &order);
        stats.runtime_ms = started.elapsed().as_millis() as u64;
        Ok(MiningOutcome {
            results,
            stats,
            order,
            maxlen,
            min_sup_count,
        })
    }
}

/// Mines with default settings (single thread, verbatim luo inheritance).
pub fn mine(db: &TransactionDatabase, params: &MiningParams) -> Result<MiningOutcome> {
    Miner::new(*params).mine(db)
}
