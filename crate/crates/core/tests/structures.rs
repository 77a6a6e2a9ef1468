use std::collections::BTreeMap;

use grove_core::grove::frozen_edges;
use grove_core::shuffle::generate;
use grove_core::structures::{
    find_nexus, growth_positions, growth_positions_by_scan, nexus_trace, three_layer_is_forest,
    young_projection, Level, YoungDiagram,
};
use grove_core::{Bias, Family};
use proptest::prelude::*;

#[test]
fn projection_is_the_frozen_family() {
    for seed in 0..30 {
        let g = generate(40, &Bias::uniform(), seed).unwrap();
        let frozen = frozen_edges(&g);
        for f in Family::ALL {
            let d = young_projection(&g, f);
            let mut boxes: Vec<(u32, u32)> = d.boxes().collect();
            boxes.sort_unstable();
            assert_eq!(boxes, frozen.family(f));
        }
    }
}

#[test]
fn diagram_json() {
    let d = YoungDiagram::new(vec![2, 2, 1, 0]).unwrap();
    assert_eq!(d.to_json(), r#"{"rows":[2,2,1]}"#);
    assert_eq!(d.size(), 5);
}

#[test]
fn three_layer_pictures_are_forests() {
    for n in 2..=30 {
        for seed in 0..20 {
            let g = generate(n, &Bias::ratios((1, 2), (1, 3), (1, 6)).unwrap(), seed).unwrap();
            assert!(three_layer_is_forest(&g), "order {n} seed {seed}");
            assert!(find_nexus(&g).is_some());
        }
    }
}

#[test]
fn nexus_levels_follow_parity() {
    let mut levels: BTreeMap<(bool, Level), usize> = BTreeMap::new();
    for seed in 0..200 {
        let trace = nexus_trace(30, &Bias::uniform(), seed).unwrap();
        for e in &trace.entries {
            let even = e.order % 2 == 0;
            *levels.entry((even, e.level)).or_default() += 1;
            if even {
                assert_eq!(e.level, Level::Flat);
            } else {
                assert_ne!(e.level, Level::Flat);
            }
            assert_eq!(e.vertex.sum() % 2, 0);
        }
        assert!(trace.displacements().iter().all(|&d| d <= 1));
    }
    // Odd orders see both off-plane layers.
    assert!(levels.get(&(false, Level::Up)).copied().unwrap_or(0) > 0);
    assert!(levels.get(&(false, Level::Down)).copied().unwrap_or(0) > 0);
}

#[test]
fn trace_output() {
    let t = nexus_trace(6, &Bias::uniform(), 2).unwrap();
    assert_eq!(t, nexus_trace(6, &Bias::uniform(), 2).unwrap());
    let csv = t.to_csv();
    assert!(csv.starts_with("step,order,i,j,k\n"));
    assert_eq!(csv.lines().count(), 6);
    let stats = t.stats();
    assert!(stats.max_norm <= 1);
    let steps: usize = stats.by_level.values().map(|(s, m)| s + m).sum();
    assert_eq!(steps, 4);
}

fn diagram() -> impl Strategy<Value = YoungDiagram> {
    prop::collection::vec(0u32..15, 0..12).prop_map(|mut rows| {
        rows.sort_unstable_by(|a, b| b.cmp(a));
        YoungDiagram::new(rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn growth_matches_scan(d in diagram()) {
        let fast = growth_positions(&d);
        prop_assert_eq!(&fast, &growth_positions_by_scan(&d));
        // Adding any growth position keeps an order ideal.
        for (i, j) in fast {
            let mut rows = d.rows.clone();
            if rows.len() <= i as usize {
                rows.resize(i as usize + 1, 0);
            }
            prop_assert_eq!(rows[i as usize], j);
            rows[i as usize] += 1;
            prop_assert!(YoungDiagram::new(rows).is_ok());
        }
    }
}
