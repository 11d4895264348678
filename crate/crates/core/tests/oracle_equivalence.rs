mod common;

use huopm::io::{generate_synthetic, GeneratorSpec};
use huopm::oracle::{brute_force_mine, compare_results};
use huopm::search::Miner;
use huopm::{mine, MiningParams};
use proptest::prelude::*;

fn grid_params() -> impl Strategy<Value = MiningParams> {
    (1..=5u32, 1..=8u32, 1..=5usize, 1..=2usize).prop_map(|(a, b, maxlen, minlen)| {
        MiningParams::new(a as f64 / 10.0, b as f64 / 10.0, minlen.min(maxlen), maxlen).unwrap()
    })
}

fn small_spec() -> impl Strategy<Value = GeneratorSpec> {
    (1..=12usize, 1..=25usize, 1..=6usize, 1..=5u32, 1..=10u32, any::<u64>()).prop_map(
        |(n_items, n_tx, avg, q, u, seed)| GeneratorSpec {
            n_items,
            n_transactions: n_tx,
            avg_transaction_len: avg.min(n_items),
            max_quantity: q,
            max_unit_utility: u,
            seed,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engine_matches_oracle(spec in small_spec(), params in grid_params()) {
        let db = generate_synthetic(&spec).unwrap();
        let engine = mine(&db, &params).unwrap();
        let oracle = brute_force_mine(&db, &params).unwrap();
        let cmp = compare_results(&engine.results, &oracle, 1e-9);
        prop_assert!(cmp.is_match(), "{:?}", cmp);
    }

    #[test]
    fn trimmed_luo_keeps_results(spec in small_spec(), params in grid_params()) {
        let db = generate_synthetic(&spec).unwrap();
        let plain = Miner::new(params).mine(&db).unwrap();
        let trimmed = Miner::new(params).trim_inherited_luo(true).mine(&db).unwrap();
        prop_assert_eq!(&plain.results, &trimmed.results);
        prop_assert!(trimmed.stats.visited_nodes <= plain.stats.visited_nodes);
    }

    #[test]
    fn thread_count_is_invisible(spec in small_spec(), params in grid_params(), threads in 2..=4usize) {
        let db = generate_synthetic(&spec).unwrap();
        let one = Miner::new(params).mine(&db).unwrap();
        let many = Miner::new(params).threads(threads).mine(&db).unwrap();
        prop_assert_eq!(one.results, many.results);
        prop_assert_eq!(one.stats.visited_nodes, many.stats.visited_nodes);
    }
}

#[test]
fn full_grid_on_a_few_databases() {
    let grid = common::full_grid();
    assert_eq!(grid.len(), 360);
    for seed in [3, 9, 19, 29] {
        let db = common::small_db(seed);
        for params in &grid {
            let engine = mine(&db, params).unwrap();
            let oracle = brute_force_mine(&db, params).unwrap();
            let cmp = compare_results(&engine.results, &oracle, 1e-9);
            assert!(cmp.is_match(), "seed {seed} {params:?}: {cmp:?}");
        }
    }
}

#[test]
fn fuzz_cases_cover_the_grids() {
    let settings: Vec<MiningParams> = common::fuzz_cases().into_iter().flat_map(|c| c.2).collect();
    assert!(settings.len() >= 100);
    for a in 1..=5 {
        assert!(settings.iter().any(|p| (p.alpha * 10.0).round() as i32 == a));
    }
    for b in 1..=8 {
        assert!(settings.iter().any(|p| (p.beta * 10.0).round() as i32 == b));
    }
    for k in 1..=5 {
        assert!(settings.iter().any(|p| p.maxlen == Some(k)));
    }
    assert!(settings.iter().any(|p| p.minlen == 2));
}

#[test]
fn longer_maxlen_never_loses_results() {
    for seed in 0..30 {
        let db = common::small_db(seed);
        let mut prev: Option<Vec<huopm::HuopResult>> = None;
        for k in 1..=5 {
            let out = mine(&db, &MiningParams::new(0.2, 0.3, 1, k).unwrap()).unwrap().results;
            if let Some(p) = &prev {
                assert!(p.iter().all(|r| out.contains(r)), "seed {seed} maxlen {k}");
            }
            prev = Some(out);
        }
    }
}
