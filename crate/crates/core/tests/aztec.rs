use std::collections::HashSet;

use grove_core::aztec::{
    classify, domino_shuffle_once, generate_tiling, tiling_misfit_stats, AztecTiling, Domino,
    DominoClass, Orientation,
};
use grove_core::recurrence_poly::{enumerate_tilings, octahedron_poly, tiling_monomial};
use grove_core::RandomSource;
use proptest::prelude::*;

#[test]
fn order_one_to_two_reaches_all_tilings() {
    let all: HashSet<AztecTiling> = enumerate_tilings(2).unwrap().into_iter().collect();
    let mut seen = HashSet::new();
    for t in enumerate_tilings(1).unwrap() {
        for seed in 0..200 {
            let next = domino_shuffle_once(&t, &mut RandomSource::new(seed)).unwrap();
            assert!(all.contains(&next));
            seen.insert(next);
        }
    }
    assert_eq!(seen, all);
}

#[test]
fn every_tiling_is_a_polynomial_term() {
    let poly = octahedron_poly(4).unwrap();
    let tilings = enumerate_tilings(4).unwrap();
    assert_eq!(poly.len(), tilings.len());
    for t in &tilings {
        assert!(poly.contains(&tiling_monomial(t)));
    }
}

#[test]
fn brickwork_corner_has_no_north_misfits() {
    // Order 8 with the top half all horizontal and the bottom half likewise.
    let n = 8i32;
    let mut dominoes = Vec::new();
    for y in (1..=2 * n - 1).step_by(2) {
        let half = 2 * n - y;
        for x in (-half..half).step_by(4) {
            dominoes.push(Domino::new(x, y, Orientation::Horizontal));
            dominoes.push(Domino::new(x, -y, Orientation::Horizontal));
        }
    }
    let t = AztecTiling::new(n as u32, dominoes).unwrap();
    let north: Vec<_> = t.dominoes().iter().filter(|d| d.y2 > 0).collect();
    assert!(north.iter().all(|d| classify(&t, d).unwrap() == DominoClass::North));
    let report = tiling_misfit_stats(&t, 0.05).unwrap();
    assert_eq!(report.sectors[0].mismatched, 0);
    assert!(report.sectors[0].outside > 0);
}

#[test]
fn large_tiling_has_frozen_corners() {
    let t = generate_tiling(120, 9).unwrap();
    let report = tiling_misfit_stats(&t, 0.05).unwrap();
    assert!(report.outside > 1000);
    assert!(report.fraction < 0.02);
    assert!(tiling_misfit_stats(&t, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_tilings_are_valid(n in 1u32..40, seed in any::<u64>()) {
        let t = generate_tiling(n, seed).unwrap();
        let back = AztecTiling::from_json(&t.to_json()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(t.dominoes().len() as u32, n * (n + 1));
        let mut counts = [0usize; 4];
        for d in t.dominoes() {
            let k = match classify(&t, d).unwrap() {
                DominoClass::North => 0,
                DominoClass::South => 1,
                DominoClass::East => 2,
                DominoClass::West => 3,
            };
            counts[k] += 1;
        }
        // Each class holds n dominoes per row pair; the four classes balance.
        prop_assert_eq!(counts[0], counts[1]);
        prop_assert_eq!(counts[2], counts[3]);
        prop_assert_eq!(generate_tiling(n, seed).unwrap(), t);
    }
}
