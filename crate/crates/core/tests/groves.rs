use std::collections::HashSet;

use grove_core::grove::{components, edge_counts, frozen_edges, triangle_config, validate};
use grove_core::lattice::{
    downward_triangles, label_endpoints, label_from_index, label_index, triangle_slots,
};
use grove_core::recurrence_poly::oracle_groves;
use grove_core::shuffle::{generate, shuffle_once, shuffle_preimage_count, shuffle_preimages};
use grove_core::{Bias, EdgeLabel, Family, Grove, Order, RandomSource};
use proptest::prelude::*;

/// The seven slot subsets a downward triangle of a grove can hold.
const SUBSETS: [[bool; 3]; 7] = [
    [false, false, false],
    [true, false, false],
    [false, true, false],
    [false, false, true],
    [true, true, false],
    [true, false, true],
    [false, true, true],
];

fn all_candidates(n: Order) -> Vec<Grove> {
    let tris = downward_triangles(n).unwrap();
    let total = 7usize.pow(tris.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut g = Grove::empty(n).unwrap();
            for t in &tris {
                let pick = SUBSETS[code % 7];
                code /= 7;
                for (slot, e) in triangle_slots(n, *t).unwrap().into_iter().enumerate() {
                    if pick[slot] {
                        g.insert(e).unwrap();
                    }
                }
            }
            g
        })
        .collect()
}

#[test]
fn validate_accepts_exactly_the_oracle_groves() {
    for n in 1..=3 {
        let oracle: HashSet<Grove> = oracle_groves(n).unwrap().into_iter().collect();
        let valid: HashSet<Grove> = all_candidates(n)
            .into_iter()
            .filter(|g| validate(g).is_ok())
            .collect();
        assert_eq!(valid, oracle, "order {n}");
    }
}

#[test]
fn validate_on_order_four_neighbourhood() {
    let n = 4;
    let oracle: Vec<Grove> = oracle_groves(n).unwrap();
    let set: HashSet<Grove> = oracle.iter().cloned().collect();
    assert_eq!(set.len(), 81);
    let all_labels: Vec<EdgeLabel> = downward_triangles(n)
        .unwrap()
        .into_iter()
        .flat_map(|t| triangle_slots(n, t).unwrap())
        .collect();
    let mut rng = RandomSource::new(17);
    for g in &oracle {
        assert!(validate(g).is_ok());
        let present: Vec<EdgeLabel> = g.edges().collect();
        let absent: Vec<EdgeLabel> = all_labels.iter().copied().filter(|e| !g.contains(*e)).collect();
        for e in &present {
            let mut h = g.clone();
            h.remove(*e).unwrap();
            assert!(!validate(&h).is_ok());
        }
        for e in &absent {
            let mut h = g.clone();
            h.insert(*e).unwrap();
            assert!(!validate(&h).is_ok());
        }
        for _ in 0..40 {
            let mut h = g.clone();
            h.remove(present[rng.below(present.len() as u32) as usize]).unwrap();
            h.insert(absent[rng.below(absent.len() as u32) as usize]).unwrap();
            assert_eq!(validate(&h).is_ok(), set.contains(&h), "{:?}", h.to_json());
        }
    }
    // Uniformly random edge sets of the right size.
    for _ in 0..20_000 {
        let mut h = Grove::empty(n).unwrap();
        while h.edge_count() < 8 {
            h.insert(all_labels[rng.below(all_labels.len() as u32) as usize]).unwrap();
        }
        assert_eq!(validate(&h).is_ok(), set.contains(&h));
    }
}

#[test]
fn preimages_invert_the_move() {
    for n in 2..=4 {
        let lower: HashSet<Grove> = oracle_groves(n - 1).unwrap().into_iter().collect();
        let mut pairs = 0u64;
        for g in oracle_groves(n).unwrap() {
            let pre = shuffle_preimages(&g).unwrap();
            assert_eq!(pre.len() as u64, shuffle_preimage_count(&g).unwrap());
            for h in pre {
                assert!(lower.contains(&h), "preimage is not a grove");
            }
            pairs += shuffle_preimage_count(&g).unwrap();
        }
        // Each lower grove has 3^(empty triangles) coin outcomes.
        let outcomes: u64 = lower
            .iter()
            .map(|h| 3u64.pow(edge_counts(h).zero as u32))
            .sum();
        assert_eq!(pairs, outcomes, "order {n}");
    }
}

#[test]
fn frozen_edges_accumulate_at_their_corners() {
    let g = generate(60, &Bias::uniform(), 5).unwrap();
    let frozen = frozen_edges(&g);
    // A(0,0) sits at the bottom corner and is frozen in any large grove.
    assert!(frozen.a.contains(&(0, 0)));
    assert!(frozen.b.contains(&(0, 0)));
    assert!(frozen.c.contains(&(0, 0)));
    let (u, v) = label_endpoints(60, EdgeLabel::a(0, 0)).unwrap();
    assert_eq!((u.k, v.k), (-59, -59));
    let (u, v) = label_endpoints(60, EdgeLabel::b(0, 0)).unwrap();
    assert!(u.j <= -59 && v.j <= -59);
    let (u, v) = label_endpoints(60, EdgeLabel::c(0, 0)).unwrap();
    assert!(u.i <= -59 && v.i <= -59);
}

#[test]
fn order_two_groves_have_three_boundary_components() {
    for g in oracle_groves(2).unwrap() {
        // Three corners apart, three midpoints joined.
        assert_eq!(components(&g).count(), 4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn label_index_roundtrip(x in 0u32..500, y in 0u32..500) {
        prop_assert_eq!(label_from_index(label_index(x, y)), (x, y));
    }

    #[test]
    fn sampled_groves_are_valid(n in 1u32..45, seed in any::<u64>(), a in 0i64..=12, b in 0i64..=12) {
        prop_assume!(a + b <= 12);
        let bias = Bias::ratios((a, 12), (b, 12), (12 - a - b, 12)).unwrap();
        let g = generate(n, &bias, seed).unwrap();
        prop_assert!(validate(&g).is_ok());
        prop_assert_eq!(g.edge_count() as u32, n * n / 2);
        for t in downward_triangles(n).unwrap() {
            prop_assert!(triangle_config(&g, t).unwrap().count() <= 2);
        }
        let next = shuffle_once(&g, &bias, &mut RandomSource::new(seed ^ 1)).unwrap();
        prop_assert!(validate(&next).is_ok());
        prop_assert_eq!(next.order(), n + 1);
    }

    #[test]
    fn json_roundtrip(n in 1u32..30, seed in any::<u64>()) {
        let g = generate(n, &Bias::uniform(), seed).unwrap();
        let back = Grove::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(&back, &g);
        for f in Family::ALL {
            prop_assert!(frozen_edges(&g).family(f).iter().all(|&(x, y)| g.labels(f).contains(&(x, y))));
        }
    }
}
