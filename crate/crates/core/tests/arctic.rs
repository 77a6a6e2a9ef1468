use grove_core::arctic::{
    circle_position, convergence_experiment, ellipse_position, misfit_stats, sector_of,
    sector_of_biased, tangency_points, temperate_ratio, Corner, PlanePoint, Position,
};
use grove_core::shuffle::generate;
use grove_core::{Bias, Family};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Fraction of a fine barycentric grid that lies inside the ellipse.
fn grid_area(bias: &Bias, d: i64) -> f64 {
    let (mut inside, mut total) = (0u64, 0u64);
    for a in 0..=d {
        for b in 0..=d - a {
            let (x, y) = (-(a as f64) / d as f64, -(b as f64) / d as f64);
            let pt = PlanePoint::new(x, y, -1.0 - x - y).unwrap();
            total += 1;
            if ellipse_position(&pt, bias).unwrap() != Position::Outside {
                inside += 1;
            }
        }
    }
    inside as f64 / total as f64
}

#[test]
fn temperate_ratio_matches_area() {
    for bias in [
        Bias::uniform(),
        Bias::ratios((1, 2), (1, 4), (1, 4)).unwrap(),
        Bias::ratios((1, 10), (3, 10), (3, 5)).unwrap(),
    ] {
        let rho = temperate_ratio(&bias);
        assert!(!rho.degenerate);
        let area = grid_area(&bias, 800);
        assert!((rho.value - area).abs() < 0.005, "{bias:?}: {} vs {area}", rho.value);
    }
    let degenerate = Bias::ratios((1, 1), (0, 1), (0, 1)).unwrap();
    assert!(temperate_ratio(&degenerate).degenerate);
}

#[test]
fn tangency_points_touch_the_sides() {
    let bias = Bias::ratios((1, 2), (1, 3), (1, 6)).unwrap();
    let tp = tangency_points(&bias).unwrap();
    for (k, p) in tp.iter().enumerate() {
        assert_eq!(p[k], 0.0);
        let pt = PlanePoint::new(p[0], p[1], p[2]).unwrap();
        assert_eq!(ellipse_position(&pt, &bias).unwrap(), Position::On);
        // Points just inside the side are inside the ellipse.
        let c = -1.0 / 3.0;
        let q: Vec<f64> = p.iter().map(|v| v + (c - v) * 1e-3).collect();
        let inner = PlanePoint::new(q[0], q[1], q[2]).unwrap();
        assert_eq!(ellipse_position(&inner, &bias).unwrap(), Position::Inside);
    }
}

#[test]
fn circle_examples() {
    let on = PlanePoint::new(rat(0, 1), rat(-1, 2), rat(-1, 2)).unwrap();
    assert_eq!(circle_position(&on).unwrap(), Position::On);
    let center = PlanePoint::new(rat(-1, 3), rat(-1, 3), rat(-1, 3)).unwrap();
    assert_eq!(circle_position(&center).unwrap(), Position::Inside);
    let corner = PlanePoint::new(rat(0, 1), rat(0, 1), rat(-1, 1)).unwrap();
    assert_eq!(circle_position(&corner).unwrap(), Position::Outside);
    assert_eq!(sector_of(&corner).unwrap(), Corner::Z);
    assert_eq!(Corner::Z.frozen_family(), Family::A);
    assert!(PlanePoint::new(rat(0, 1), rat(0, 1), rat(0, 1)).is_err());
    assert!(sector_of(&center).is_err());
}

#[test]
fn biased_ellipse_is_the_better_fit() {
    let bias = Bias::ratios((1, 2), (1, 4), (1, 4)).unwrap();
    let g = generate(160, &bias, 3).unwrap();
    let right = misfit_stats(&g, 0.05, &bias).unwrap();
    let swapped = misfit_stats(&g, 0.05, &Bias::ratios((1, 4), (1, 2), (1, 4)).unwrap()).unwrap();
    let circle = misfit_stats(&g, 0.05, &Bias::uniform()).unwrap();
    assert!(right.outside > 1000);
    assert!(right.fraction < 0.01);
    assert!(swapped.fraction > 5.0 * right.fraction.max(0.005));
    assert!(circle.fraction > right.fraction);
}

#[test]
fn experiment_is_deterministic() {
    let a = convergence_experiment(&[20, 30], 4, 0.1, &Bias::uniform(), 9).unwrap();
    let b = convergence_experiment(&[20, 30], 4, 0.1, &Bias::uniform(), 9).unwrap();
    assert_eq!(a, b);
    assert!(convergence_experiment(&[], 4, 0.1, &Bias::uniform(), 9).is_err());
    assert!(convergence_experiment(&[20], 0, 0.1, &Bias::uniform(), 9).is_err());
    assert!(convergence_experiment(&[20], 4, -0.1, &Bias::uniform(), 9).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symmetric_ellipse_is_the_circle(d in 1i64..200, a in 0i64..200, b in 0i64..200) {
        prop_assume!(a + b <= d);
        let (x, y) = (rat(-a, d), rat(-b, d));
        let z = rat(-1, 1) - &x - &y;
        let pt = PlanePoint::new(x, y, z).unwrap();
        prop_assert_eq!(circle_position(&pt).unwrap(), ellipse_position(&pt, &Bias::uniform()).unwrap());
    }

    #[test]
    fn chord_sectors_agree_with_small_coordinates(a in 0u32..=1000, b in 0u32..=1000) {
        prop_assume!(a + b <= 1000);
        let (x, y) = (-(a as f64) / 1000.0, -(b as f64) / 1000.0);
        let pt = PlanePoint::new(x, y, -1.0 - x - y).unwrap();
        if circle_position(&pt).unwrap() == Position::Outside {
            prop_assert_eq!(sector_of(&pt).unwrap(), sector_of_biased(&pt, &Bias::uniform()).unwrap());
        }
    }
}
