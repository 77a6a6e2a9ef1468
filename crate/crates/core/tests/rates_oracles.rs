use grove_core::grove::triangle_config;
use grove_core::lattice::{downward_triangles, label_index};
use grove_core::rates::{grove_e, grove_p};
use grove_core::recurrence_poly::oracle_grove_stats;
use grove_core::shuffle::shuffle_distribution;
use grove_core::{Bias, Order};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn biases() -> Vec<Bias> {
    vec![
        Bias::uniform(),
        Bias::ratios((1, 2), (1, 3), (1, 6)).unwrap(),
        Bias::ratios((1, 5), (1, 5), (3, 5)).unwrap(),
        Bias::ratios((1, 7), (4, 7), (2, 7)).unwrap(),
    ]
}

/// Mean slot presence and mean `1 - #present` per triangle, from the exact
/// distribution of the shuffling process.
fn exact_means(n: Order, bias: &Bias) -> (Vec<[BigRational; 3]>, Vec<BigRational>) {
    let dist = shuffle_distribution(n, bias).unwrap();
    let tris = downward_triangles(n).unwrap();
    let mut presence = vec![[BigRational::zero(), BigRational::zero(), BigRational::zero()]; tris.len()];
    let mut e = vec![BigRational::zero(); tris.len()];
    let total: BigRational = dist.iter().map(|(_, w)| w.clone()).sum();
    assert!(total.is_one());
    for (g, w) in &dist {
        for t in &tris {
            let idx = label_index(t.p, t.q);
            let cfg = triangle_config(g, *t).unwrap();
            for (slot, present) in cfg.present.iter().enumerate() {
                if *present {
                    presence[idx][slot] += w;
                }
            }
            e[idx] += w * BigRational::from_integer(BigInt::from(1 - cfg.count() as i64));
        }
    }
    (presence, e)
}

#[test]
fn rates_match_exact_shuffle_distribution() {
    for bias in biases() {
        let e_grid = grove_e(&bias, 6).unwrap();
        let p_grid = grove_p(&bias, 6).unwrap();
        for n in 1..=5 {
            let (presence, e) = exact_means(n, &bias);
            assert_eq!(e_grid.e_slice(n).unwrap(), e, "E at order {n}, bias {bias:?}");
            let horizontal: Vec<BigRational> = presence.iter().map(|s| s[0].clone()).collect();
            assert_eq!(p_grid.p_slice(n).unwrap(), horizontal, "p at order {n}, bias {bias:?}");
        }
    }
}

#[test]
fn uniform_distribution_matches_polynomial_counts() {
    for n in 1..=4 {
        let stats = oracle_grove_stats(n).unwrap();
        let (presence, e) = exact_means(n, &Bias::uniform());
        for idx in 0..presence.len() {
            assert_eq!(stats.p[idx], presence[idx][0]);
            assert_eq!(stats.q[idx], presence[idx][1]);
            assert_eq!(stats.r[idx], presence[idx][2]);
            assert_eq!(stats.e[idx], e[idx]);
            assert_eq!(stats.e_face[idx], e[idx]);
        }
    }
}

mod aztec {
    use std::collections::HashMap;

    use grove_core::aztec::{generate_tiling_with, north_positions};
    use grove_core::rates::{aztec_e, aztec_face_expectations, aztec_p, aztec_p_from_rates};
    use grove_core::recurrence_poly::enumerate_tilings;
    use grove_core::RandomSource;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    #[test]
    fn probabilities_match_enumeration() {
        let p = aztec_p(4).unwrap();
        for n in 1..=4u32 {
            let all = enumerate_tilings(n).unwrap();
            let mut freq: HashMap<(i32, i32), i64> = HashMap::new();
            for t in &all {
                for pos in north_positions(t) {
                    *freq.entry(pos).or_default() += 1;
                }
            }
            let r = n as i32 + 1;
            for i in -r..=r {
                for j in -r..=r {
                    let want = BigRational::new(
                        BigInt::from(freq.get(&(i, j)).copied().unwrap_or(0)),
                        BigInt::from(all.len()),
                    );
                    assert_eq!(p.get(n, i, j), want, "order {n} at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn creation_rates_match_face_exponents() {
        let e = aztec_e(4).unwrap();
        for n in 1..=4 {
            let oracle = aztec_face_expectations(n).unwrap();
            for ((i, j), v) in oracle {
                assert_eq!(e.get(n, i, j), v, "order {n} at ({i},{j})");
            }
        }
        assert_eq!(aztec_p_from_rates(&aztec_e(10).unwrap(), 10), aztec_p(10).unwrap());
    }

    #[test]
    fn sampled_frequencies_near_exact() {
        let n = 8;
        let samples = 4000;
        let p = aztec_p(n).unwrap();
        let mut rng = RandomSource::new(23);
        let mut freq: HashMap<(i32, i32), u32> = HashMap::new();
        for _ in 0..samples {
            let t = generate_tiling_with(n, &mut rng).unwrap();
            for pos in north_positions(&t) {
                *freq.entry(pos).or_default() += 1;
            }
        }
        let r = n as i32;
        for i in -r..=r {
            for j in -r..=r {
                let exact = p.get(n, i, j).to_f64().unwrap();
                let seen = freq.get(&(i, j)).copied().unwrap_or(0) as f64 / samples as f64;
                assert!((seen - exact).abs() < 0.035, "({i},{j}): {seen} vs {exact}");
            }
        }
    }
}

#[test]
fn probabilities_telescope_and_stay_in_range() {
    for bias in biases() {
        let e = grove_e(&bias, 10).unwrap();
        let p = grove_p(&bias, 10).unwrap();
        let r = bias.alpha() + bias.beta();
        let w = BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        for (i, j, k) in p.points() {
            let sum: BigRational = (0..k.saturating_sub(1))
                .map(|l| e.get(i, j, l).unwrap().clone())
                .sum();
            let v = p.get(i, j, k).unwrap();
            assert_eq!(v, &(&w * sum), "({i},{j},{k})");
            assert!(*v >= BigRational::zero() && *v <= BigRational::one(), "({i},{j},{k}) = {v}");
        }
    }
    let p = grove_p(&Bias::uniform(), 10).unwrap();
    for (i, j, k) in p.points() {
        let mut d = p.get(i, j, k).unwrap().denom().clone();
        while (&d % 3u32).is_zero() {
            d /= 3u32;
        }
        assert!(d == BigInt::from(1));
    }
}
