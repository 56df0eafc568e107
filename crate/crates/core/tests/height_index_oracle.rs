mod common;

use common::{random_skyline, RangeOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rdds::{ColumnBoard, HeightIndex, Skyline, Slot};

#[test]
fn example_against_range_oracle() {
    let sky = Skyline::from_runs(8, vec![(0, 4).into(), (3, 0).into(), (5, 2).into()]).unwrap();
    let idx = HeightIndex::build(&sky);
    let oracle = RangeOracle::new(&sky);
    for h in 0..6 {
        assert_eq!(idx.widest_at_or_below(h), oracle.widest_at_or_below(h));
    }
    assert_eq!(oracle.widest_at_or_below(1), Slot { x: 3, width: 2, floor: 0 });
    assert_eq!(oracle.widest_at_or_below(2), Slot { x: 3, width: 5, floor: 2 });
}

#[test]
fn matches_range_oracle_and_column_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..300 {
        let max_h = if trial % 2 == 0 { 6 } else { 1000 };
        let sky = random_skyline(&mut rng, 120, max_h);
        let idx = HeightIndex::build(&sky);
        let oracle = RangeOracle::new(&sky);
        let cols = ColumnBoard::from_skyline(&sky);
        let mut probes: Vec<i64> = sky
            .runs()
            .iter()
            .flat_map(|r| [r.height - 1, r.height, r.height + 1])
            .collect();
        probes.push(-1);
        probes.sort_unstable();
        probes.dedup();
        let mut prev = 0;
        for h in probes {
            let got = idx.widest_at_or_below(h);
            assert_eq!(got, oracle.widest_at_or_below(h), "h={h} {sky:?}");
            assert_eq!(got, cols.widest_at_or_below(h), "h={h}");
            assert!(got.width >= prev, "monotone");
            prev = got.width;
            if got.width > 0 {
                assert!(sky.landing_height(got.x, got.width).unwrap() <= h);
                assert_eq!(sky.landing_height(got.x, got.width).unwrap(), got.floor);
            }
        }
    }
}

#[test]
fn entries_are_vertex_heights_with_nondecreasing_width() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let sky = random_skyline(&mut rng, 60, 20);
        let idx = HeightIndex::build(&sky);
        let heights: std::collections::BTreeSet<i64> = sky.runs().iter().map(|r| r.height).collect();
        for pair in idx.entries().windows(2) {
            assert!(pair[0].0 < pair[1].0);
            assert!(pair[0].1.width <= pair[1].1.width);
        }
        for (h, _) in idx.entries() {
            assert!(heights.contains(h));
        }
    }
}

#[test]
fn boundary_heights_do_not_block() {
    // A slot resting exactly on a ledge at height 3 extends across it.
    let sky = Skyline::from_runs(9, vec![(0, 9).into(), (1, 3).into(), (4, 1).into(), (6, 3).into(), (8, 9).into()])
        .unwrap();
    let idx = HeightIndex::build(&sky);
    assert_eq!(idx.widest_at_or_below(3), Slot { x: 1, width: 7, floor: 3 });
    assert_eq!(idx.widest_at_or_below(2), Slot { x: 4, width: 2, floor: 1 });
    let probe: i64 = ChaCha8Rng::seed_from_u64(0).random_range(3..9);
    assert_eq!(idx.widest_at_or_below(probe).width, 7);
}
