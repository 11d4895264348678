//! UO-nlists and FUO-tables, and the join that derives a (k+1)-itemset's
//! structures from two k-itemsets sharing a prefix.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Pattern, RevisedDatabase, Tid, TotalOrder};

/// One supporting transaction of a pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct UoTuple {
    pub tid: Tid,
    pub uo: f64,
    /// Largest single-item occupancies after the pattern, descending. Shared
    /// between a node and the joins that inherit it.
    pub luo: Arc<[f64]>,
    luo_sum: f64,
    // u(X, T) and tu(T); joins combine utilities so uo is a single division.
    utility: f64,
    tu: f64,
}

impl UoTuple {
    pub fn new(tid: Tid, utility: f64, tu: f64, luo: Arc<[f64]>) -> Self {
        let luo_sum = luo.iter().sum();
        UoTuple {
            tid,
            uo: utility / tu,
            luo,
            luo_sum,
            utility,
            tu,
        }
    }

    pub fn utility(&self) -> f64 {
        self.utility
    }

    /// rruo(X, T): the sum of the luo values.
    pub fn rruo(&self) -> f64 {
        self.luo_sum
    }
}

/// Tuples ordered by ascending tid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UoNList {
    tuples: Vec<UoTuple>,
}

impl UoNList {
    pub fn from_tuples(tuples: Vec<UoTuple>) -> Self {
        debug_assert!(tuples.windows(2).all(|w| w[0].tid < w[1].tid));
        UoNList { tuples }
    }

    pub fn tuples(&self) -> &[UoTuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tids(&self) -> impl Iterator<Item = Tid> + '_ {
        self.tuples.iter().map(|t| t.tid)
    }

    pub fn get(&self, tid: Tid) -> Option<&UoTuple> {
        self.tuples
            .binary_search_by_key(&tid, |t| t.tid)
            .ok()
            .map(|i| &self.tuples[i])
    }
}

/// Summary of a UO-nlist: support, mean uo and mean rruo.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FuoTable {
    pub sup: usize,
    pub uo: f64,
    pub rruo: f64,
}

impl FuoTable {
    pub fn summarize(list: &UoNList) -> Self {
        let sup = list.len();
        if sup == 0 {
            return FuoTable::default();
        }
        let (uo, rruo) = list
            .tuples
            .iter()
            .fold((0.0, 0.0), |(u, r), t| (u + t.uo, r + t.rruo()));
        FuoTable {
            sup,
            uo: uo / sup as f64,
            rruo: rruo / sup as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternNode {
    pub pattern: Pattern,
    /// Rank of the pattern's last item under ≺.
    pub last_rank: u32,
    pub uonl: UoNList,
    pub fuot: FuoTable,
}

/// How a joined tuple derives its luo from the later sibling's tuple.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LuoInheritance {
    /// Reuse the sibling's luo unchanged.
    #[default]
    Verbatim,
    /// Drop entries beyond `maxlen - |Xab|`. Experimental; still a sound bound.
    Trimmed { maxlen: usize },
}

/// One pass over the revised database producing a node per frequent item,
/// in ≺ order.
pub fn build_initial_nodes(
    db: &RevisedDatabase,
    order: &TotalOrder,
    maxlen: usize,
) -> Vec<PatternNode> {
    let mut lists: Vec<Vec<UoTuple>> = vec![Vec::new(); order.len()];
    let extend = maxlen.saturating_sub(1);
    let empty: Arc<[f64]> = Arc::from(Vec::new());
    // Sorted (descending) occupancies of the entries after the current position.
    let mut suffix: Vec<f64> = Vec::new();

    for t in db.transactions() {
        suffix.clear();
        for e in t.entries().iter().rev() {
            let uo = e.utility / t.tu;
            let luo = if extend == 0 || suffix.is_empty() {
                empty.clone()
            } else {
                Arc::from(&suffix[..extend.min(suffix.len())])
            };
            lists[e.rank as usize].push(UoTuple::new(t.tid, e.utility, t.tu, luo));
            let at = suffix.partition_point(|&v| v >= uo);
            suffix.insert(at, uo);
        }
    }

    lists
        .into_iter()
        .enumerate()
        .map(|(rank, tuples)| {
            let uonl = UoNList::from_tuples(tuples);
            let fuot = FuoTable::summarize(&uonl);
            PatternNode {
                pattern: Pattern::new(vec![order.item_at(rank as u32)]),
                last_rank: rank as u32,
                uonl,
                fuot,
            }
        })
        .collect()
}

/// Joins `xa` and `xb` (both extensions of `prefix` by one item, `xa` first in
/// ≺) into the node for their union. Returns `Ok(None)` when the running
/// support bound falls below `min_sup_count` before the scan completes.
pub fn construct(
    prefix: Option<&PatternNode>,
    xa: &PatternNode,
    xb: &PatternNode,
    min_sup_count: usize,
    inheritance: LuoInheritance,
) -> Result<Option<PatternNode>> {
    debug_assert!(xa.last_rank < xb.last_rank);
    debug_assert_eq!(xa.pattern.len(), xb.pattern.len());

    let joined_len = xa.pattern.len() + 1;
    let mut sup_ub = xa.fuot.sup;
    let mut tuples = Vec::with_capacity(xa.uonl.len().min(xb.uonl.len()));
    let (mut uo_sum, mut rruo_sum) = (0.0, 0.0);

    let b_tuples = xb.uonl.tuples();
    let p_tuples = prefix.map(|p| p.uonl.tuples());
    let (mut bi, mut pi) = (0usize, 0usize);

    for ea in xa.uonl.tuples() {
        while bi < b_tuples.len() && b_tuples[bi].tid < ea.tid {
            bi += 1;
        }
        match b_tuples.get(bi).filter(|eb| eb.tid == ea.tid) {
            Some(eb) => {
                let utility = match p_tuples {
                    Some(pt) if !pt.is_empty() => {
                        while pi < pt.len() && pt[pi].tid < ea.tid {
                            pi += 1;
                        }
                        let e = pt
                            .get(pi)
                            .filter(|e| e.tid == ea.tid)
                            .ok_or(Error::PrefixTupleMissing { tid: ea.tid })?;
                        ea.utility + eb.utility - e.utility
                    }
                    _ => ea.utility + eb.utility,
                };
                let tuple = match inheritance {
                    LuoInheritance::Verbatim => UoTuple {
                        tid: ea.tid,
                        uo: utility / ea.tu,
                        luo: eb.luo.clone(),
                        luo_sum: eb.luo_sum,
                        utility,
                        tu: ea.tu,
                    },
                    LuoInheritance::Trimmed { maxlen } => {
                        let keep = maxlen.saturating_sub(joined_len).min(eb.luo.len());
                        UoTuple::new(ea.tid, utility, ea.tu, Arc::from(&eb.luo[..keep]))
                    }
                };
                uo_sum += tuple.uo;
                rruo_sum += tuple.rruo();
                tuples.push(tuple);
            }
            None => {
                sup_ub -= 1;
                if sup_ub < min_sup_count {
                    return Ok(None);
                }
            }
        }
    }

    let sup = tuples.len();
    if sup == 0 {
        return Ok(None);
    }
    let fuot = FuoTable {
        sup,
        uo: uo_sum / sup as f64,
        rruo: rruo_sum / sup as f64,
    };
    Ok(Some(PatternNode {
        pattern: xa.pattern.extended(xb.pattern.last().expect("non-empty pattern")),
        last_rank: xb.last_rank,
        uonl: UoNList { tuples },
        fuot,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ex_db;
    use crate::measures;
    use crate::model::{build_total_order, revise_database, TransactionDatabase};

    fn setup(maxlen: usize) -> (TransactionDatabase, TotalOrder, RevisedDatabase, Vec<PatternNode>) {
        let db = ex_db();
        let order = build_total_order(&db.support_counts(), 3);
        let revised = revise_database(&db, &order);
        let nodes = build_initial_nodes(&revised, &order, maxlen);
        (db, order, revised, nodes)
    }

    fn node<'a>(nodes: &'a [PatternNode], db: &TransactionDatabase, label: &str) -> &'a PatternNode {
        let id = db.symbols().id(label).unwrap();
        nodes.iter().find(|n| n.pattern.items() == [id]).unwrap()
    }

    #[test]
    fn initial_node_of_c() {
        let (db, _, _, nodes) = setup(3);
        let c = node(&nodes, &db, "c");
        assert_eq!(c.fuot.sup, 5);
        assert!((c.fuot.uo - 0.05108).abs() < 5e-4);
        assert!((c.fuot.rruo - 0.76028).abs() < 5e-4);
        let t6 = c.uonl.get(6).unwrap();
        assert!((t6.uo - 0.1).abs() < 1e-12);
        assert_eq!(t6.luo.len(), 2);
        assert!((t6.luo[0] - 0.5).abs() < 1e-12);
        assert!((t6.luo[1] - 10.0 / 60.0).abs() < 1e-12);
    }

    #[test]
    fn initial_nodes_match_direct_measures() {
        let (_, order, revised, nodes) = setup(3);
        for n in &nodes {
            for tuple in n.uonl.tuples() {
                let t = revised.transactions().iter().find(|t| t.tid == tuple.tid).unwrap();
                let luo = measures::luo_in_transaction(&n.pattern, t, &order, 3).unwrap();
                assert_eq!(&luo[..], &tuple.luo[..]);
            }
        }
    }

    #[test]
    fn maxlen_one_has_empty_luo() {
        let (_, _, _, nodes) = setup(1);
        assert!(nodes.iter().all(|n| n.fuot.rruo == 0.0
            && n.uonl.tuples().iter().all(|t| t.luo.is_empty())));
    }

    #[test]
    fn join_c_with_a() {
        let (db, _, _, nodes) = setup(3);
        let ca = construct(None, node(&nodes, &db, "c"), node(&nodes, &db, "a"), 3, LuoInheritance::Verbatim)
            .unwrap()
            .unwrap();
        assert_eq!(ca.uonl.tids().collect::<Vec<_>>(), vec![1, 2, 6]);
        assert_eq!(ca.fuot.sup, 3);
        assert!((ca.fuot.uo - 0.2431).abs() < 5e-4);
        // a's luo at T1, T2, T6 with maxlen 3: (20+20)/63, (20+20)/62, (30+10)/60
        let oracle = (40.0 / 63.0 + 40.0 / 62.0 + 40.0 / 60.0) / 3.0;
        assert!((ca.fuot.rruo - oracle).abs() < 1e-12);
        assert!((ca.fuot.rruo - 0.6489).abs() < 5e-4);
    }

    #[test]
    fn join_with_prefix_subtracts_prefix_uo() {
        let (db, order, _, nodes) = setup(3);
        let (c, a, e) = (node(&nodes, &db, "c"), node(&nodes, &db, "a"), node(&nodes, &db, "e"));
        let ca = construct(None, c, a, 1, LuoInheritance::Verbatim).unwrap().unwrap();
        let ce = construct(None, c, e, 1, LuoInheritance::Verbatim).unwrap().unwrap();
        let cae = construct(Some(c), &ca, &ce, 1, LuoInheritance::Verbatim).unwrap().unwrap();
        let p = Pattern::from_labels(&["c", "a", "e"], db.symbols(), &order).unwrap();
        assert_eq!(cae.pattern, p);
        assert_eq!(cae.fuot.sup, 3);
        assert!((cae.fuot.uo - measures::uo_of_pattern(&p, &db).unwrap()).abs() < 1e-9);
        assert!((cae.fuot.uo - 0.6232).abs() < 5e-4);
    }

    #[test]
    fn missing_prefix_tuple_is_reported() {
        let (db, _, _, nodes) = setup(3);
        let (c, a, e, b) = (
            node(&nodes, &db, "c"),
            node(&nodes, &db, "a"),
            node(&nodes, &db, "e"),
            node(&nodes, &db, "b"),
        );
        let ae = construct(None, a, e, 1, LuoInheritance::Verbatim).unwrap().unwrap();
        let ab = construct(None, a, b, 1, LuoInheritance::Verbatim).unwrap().unwrap();
        // c is not the real prefix of ae/ab; T3 is missing from it
        let err = construct(Some(c), &ae, &ab, 1, LuoInheritance::Verbatim).unwrap_err();
        assert!(matches!(err, Error::PrefixTupleMissing { .. }));
    }

    #[test]
    fn disjoint_lists_abort_early() {
        let mk = |tids: &[Tid], rank: u32| {
            let tuples: Vec<UoTuple> = tids
                .iter()
                .map(|&t| UoTuple::new(t, 1.0, 10.0, Arc::from(Vec::new())))
                .collect();
            let uonl = UoNList::from_tuples(tuples);
            PatternNode {
                pattern: Pattern::new(vec![crate::model::ItemId(rank)]),
                last_rank: rank,
                fuot: FuoTable::summarize(&uonl),
                uonl,
            }
        };
        let xa = mk(&[1, 3, 5], 0);
        let xb = mk(&[2, 4, 6], 1);
        assert_eq!(construct(None, &xa, &xb, 2, LuoInheritance::Verbatim).unwrap(), None);
        assert_eq!(construct(None, &xa, &xb, 1, LuoInheritance::Verbatim).unwrap(), None);
    }

    #[test]
    fn trimmed_inheritance_shortens_luo() {
        let (db, _, _, nodes) = setup(3);
        let (c, a) = (node(&nodes, &db, "c"), node(&nodes, &db, "a"));
        let ca = construct(None, c, a, 1, LuoInheritance::Trimmed { maxlen: 3 }).unwrap().unwrap();
        assert!(ca.uonl.tuples().iter().all(|t| t.luo.len() <= 1));
        let verbatim = construct(None, c, a, 1, LuoInheritance::Verbatim).unwrap().unwrap();
        assert!(ca.fuot.rruo <= verbatim.fuot.rruo);
    }
}
