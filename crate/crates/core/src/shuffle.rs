//! Grove shuffling: the local move from order `n` to `n + 1`, random
//! generation, and exact distributions for small orders.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grove::{validate, Grove};
use crate::lattice::{check_order, labels_per_family, EdgeLabel, Family, Order};

/// Drift parameters of the biased shuffle, held exactly.
///
/// An empty triangle is refilled with the pair `{A, B}` with probability
/// `alpha`, `{A, C}` with probability `beta` and `{B, C}` with probability
/// `gamma`. Under this assignment the creation-rate generating function is
/// `1 / (1 + xyz - alpha(x + yz) - beta(y + xz) - gamma(z + xy))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bias {
    alpha: Ratio<i64>,
    beta: Ratio<i64>,
    gamma: Ratio<i64>,
}

impl Bias {
    pub fn new(alpha: Ratio<i64>, beta: Ratio<i64>, gamma: Ratio<i64>) -> Result<Self> {
        let zero = Ratio::zero();
        if alpha < zero || beta < zero || gamma < zero {
            return Err(Error::InvalidBias(format!(
                "parameters must be nonnegative, got ({alpha}, {beta}, {gamma})"
            )));
        }
        if alpha + beta + gamma != Ratio::one() {
            return Err(Error::InvalidBias(format!(
                "parameters must sum to 1, got ({alpha}, {beta}, {gamma})"
            )));
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// `gamma` is taken as `1 - alpha - beta`.
    pub fn from_alpha_beta(alpha: Ratio<i64>, beta: Ratio<i64>) -> Result<Self> {
        Self::new(alpha, beta, Ratio::one() - alpha - beta)
    }

    pub fn uniform() -> Self {
        let third = Ratio::new(1, 3);
        Self {
            alpha: third,
            beta: third,
            gamma: third,
        }
    }

    /// Convenience constructor from integer ratios, e.g. `(1, 2), (1, 4), (1, 4)`.
    pub fn ratios(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Result<Self> {
        let mk = |(n, d): (i64, i64)| {
            if d == 0 {
                Err(Error::InvalidBias("zero denominator".into()))
            } else {
                Ok(Ratio::new(n, d))
            }
        };
        Self::new(mk(a)?, mk(b)?, mk(c)?)
    }

    pub fn alpha(&self) -> Ratio<i64> {
        self.alpha
    }

    pub fn beta(&self) -> Ratio<i64> {
        self.beta
    }

    pub fn gamma(&self) -> Ratio<i64> {
        self.gamma
    }

    pub fn is_uniform(&self) -> bool {
        *self == Self::uniform()
    }

    pub fn as_big(&self) -> [BigRational; 3] {
        [self.alpha, self.beta, self.gamma].map(to_big)
    }

    pub fn as_f64(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma].map(|r| *r.numer() as f64 / *r.denom() as f64)
    }

    /// Probability of creating the pair that omits `missing`.
    pub fn pair_weight(&self, missing: Family) -> Ratio<i64> {
        match missing {
            Family::C => self.alpha,
            Family::B => self.beta,
            Family::A => self.gamma,
        }
    }
}

impl Default for Bias {
    fn default() -> Self {
        Self::uniform()
    }
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

pub(crate) fn to_big(r: Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Parses an exact probability: `p/q`, an integer, or a decimal such as `0.25`.
pub fn parse_probability(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    let bad = || Error::InvalidBias(format!("cannot parse probability {s:?}"));
    let r = if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: i64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().map_err(|_| bad())?;
        Ratio::new(whole * den + num, den)
    } else {
        Ratio::<i64>::from_str(s).map_err(|_| bad())?
    };
    if r < Ratio::zero() || r > Ratio::one() {
        return Err(Error::InvalidBias(format!("probability {s} is outside [0, 1]")));
    }
    Ok(r)
}

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 1;

/// Deterministic random stream: ChaCha8 keyed by a 64-bit seed, with an
/// optional stream id for independent replicates.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream `stream` of the master seed; distinct streams do not overlap.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Position in the underlying stream, in 32-bit words.
    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    pub fn coin(&mut self) -> bool {
        self.rng.next_u32() & 1 == 1
    }

    pub fn below(&mut self, n: u32) -> u32 {
        self.rng.random_range(0..n)
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// The family left out of a freshly created pair.
    fn missing_family(&mut self, thresholds: &Option<[f64; 2]>) -> Family {
        let k = match thresholds {
            None => self.below(3),
            Some([t0, t1]) => {
                let u = self.unit();
                if u < *t0 {
                    0
                } else if u < *t1 {
                    1
                } else {
                    2
                }
            }
        };
        [Family::C, Family::B, Family::A][k as usize]
    }
}

fn thresholds(bias: &Bias) -> Option<[f64; 2]> {
    if bias.is_uniform() {
        None
    } else {
        let [a, b, _] = bias.as_f64();
        Some([a, a + b])
    }
}

/// Applies the local move in place and reinterprets the grove at order
/// `n + 1`. The input is assumed to be a grove.
pub(crate) fn shuffle_in_place(g: &mut Grove, bias: &Bias, rng: &mut RandomSource) {
    let n = g.order;
    let th = thresholds(bias);
    for p in 0..n {
        for q in 0..n - p {
            let r = n - 1 - p - q;
            let slots = [
                crate::lattice::label_index(p, q),
                crate::lattice::label_index(r, p),
                crate::lattice::label_index(r, q),
            ];
            let present = [
                g.bits[0][slots[0]],
                g.bits[1][slots[1]],
                g.bits[2][slots[2]],
            ];
            match present.iter().filter(|&&b| b).count() {
                2 => {
                    for f in 0..3 {
                        g.bits[f][slots[f]] = false;
                    }
                }
                0 => {
                    let missing = rng.missing_family(&th).index();
                    for f in 0..3 {
                        g.bits[f][slots[f]] = f != missing;
                    }
                }
                _ => {}
            }
        }
    }
    g.order = n + 1;
    let len = labels_per_family(n + 1);
    for bits in &mut g.bits {
        bits.resize(len, false);
    }
}

/// One shuffle step: a grove of order `n` to a grove of order `n + 1`.
pub fn shuffle_once(g: &Grove, bias: &Bias, rng: &mut RandomSource) -> Result<Grove> {
    validate(g).into_result()?;
    let mut out = g.clone();
    shuffle_in_place(&mut out, bias, rng);
    Ok(out)
}

/// Random grove of order `n`, using the stream of `rng`.
pub fn generate_with(n: Order, bias: &Bias, rng: &mut RandomSource) -> Result<Grove> {
    check_order(n)?;
    let mut g = Grove::empty(1)?;
    for _ in 1..n {
        shuffle_in_place(&mut g, bias, rng);
    }
    Ok(g)
}

/// Random grove of order `n`, by `n - 1` shuffles of the order-1 grove.
pub fn generate(n: Order, bias: &Bias, seed: u64) -> Result<Grove> {
    generate_with(n, bias, &mut RandomSource::new(seed))
}

/// All groves of order `k` that the move can take to `g` (order `k + 1`).
pub fn shuffle_preimages(g: &Grove) -> Result<Vec<Grove>> {
    let n1 = g.order;
    if n1 < 2 {
        return Err(Error::InvalidOrder(n1, 2));
    }
    validate(g).into_result()?;
    let k = n1 - 1;
    // Labels on the outer ring of order k + 1 are never produced by the move.
    let ring_start = labels_per_family(k);
    if g.bits.iter().any(|b| b[ring_start..].iter().any(|&x| x)) {
        return Err(Error::InvalidGrove(
            "edge on the outermost row cannot come from a shuffle".into(),
        ));
    }
    let mut base = Grove::empty(k)?;
    let mut free = Vec::new();
    for p in 0..k {
        for q in 0..k - p {
            let r = k - 1 - p - q;
            let labels = [EdgeLabel::a(p, q), EdgeLabel::b(r, p), EdgeLabel::c(r, q)];
            let present: Vec<bool> = labels.iter().map(|e| g.contains(*e)).collect();
            match present.iter().filter(|&&b| b).count() {
                1 => {
                    let e = labels[present.iter().position(|&b| b).unwrap()];
                    base.insert(e)?;
                }
                0 => free.push(labels),
                _ => {}
            }
        }
    }
    let total = 3usize.pow(free.len() as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut h = base.clone();
        for labels in &free {
            let missing = code % 3;
            code /= 3;
            for (f, e) in labels.iter().enumerate() {
                if f != missing {
                    h.insert(*e)?;
                }
            }
        }
        out.push(h);
    }
    Ok(out)
}

/// Number of preimages of `g` under the move, `3^c` where `c` counts the
/// two-edge triangles of any preimage.
pub fn shuffle_preimage_count(g: &Grove) -> Result<u64> {
    let n1 = g.order;
    if n1 < 2 {
        return Err(Error::InvalidOrder(n1, 2));
    }
    validate(g).into_result()?;
    let k = n1 - 1;
    let mut c = 0u32;
    for p in 0..k {
        for q in 0..k - p {
            let r = k - 1 - p - q;
            let present = g.has(Family::A, p, q) as u8
                + g.has(Family::B, r, p) as u8
                + g.has(Family::C, r, q) as u8;
            if present == 0 {
                c += 1;
            }
        }
    }
    Ok(3u64.pow(c))
}

/// Exact distribution of the shuffle output at order `n` under `bias`,
/// obtained by following every coin outcome. Guarded to `n <= 6`.
pub fn shuffle_distribution(n: Order, bias: &Bias) -> Result<Vec<(Grove, BigRational)>> {
    check_order(n)?;
    crate::recurrence_poly::guard("exact shuffle distribution", 6, n)?;
    let weights: [(Family, BigRational); 3] =
        [Family::C, Family::B, Family::A].map(|f| (f, to_big(bias.pair_weight(f))));
    let mut dist: HashMap<Grove, BigRational> = HashMap::new();
    dist.insert(Grove::empty(1)?, BigRational::one());
    for k in 1..n {
        let mut next: HashMap<Grove, BigRational> = HashMap::new();
        for (g, w) in dist {
            let mut fixed = g.clone();
            let mut free = Vec::new();
            for p in 0..k {
                for q in 0..k - p {
                    let r = k - 1 - p - q;
                    let labels = [EdgeLabel::a(p, q), EdgeLabel::b(r, p), EdgeLabel::c(r, q)];
                    let present = labels.iter().filter(|e| g.contains(**e)).count();
                    match present {
                        2 => {
                            for e in labels {
                                fixed.remove(e)?;
                            }
                        }
                        0 => free.push(labels),
                        _ => {}
                    }
                }
            }
            fixed.order = k + 1;
            let len = labels_per_family(k + 1);
            for bits in &mut fixed.bits {
                bits.resize(len, false);
            }
            let total = 3usize.pow(free.len() as u32);
            for mut code in 0..total {
                let mut h = fixed.clone();
                let mut weight = w.clone();
                for labels in &free {
                    let (missing, pw) = &weights[code % 3];
                    code /= 3;
                    weight *= pw;
                    for e in labels {
                        if e.family != *missing {
                            h.insert(*e)?;
                        }
                    }
                }
                if !weight.is_zero() {
                    *next.entry(h).or_insert_with(BigRational::zero) += weight;
                }
            }
        }
        dist = next;
    }
    let mut out: Vec<(Grove, BigRational)> = dist.into_iter().collect();
    out.sort_by_cached_key(|(g, _)| g.to_json());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_probabilities() {
        assert_eq!(parse_probability("1/3").unwrap(), Ratio::new(1, 3));
        assert_eq!(parse_probability("0.6").unwrap(), Ratio::new(3, 5));
        assert_eq!(parse_probability(".25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_probability("1").unwrap(), Ratio::one());
        assert!(parse_probability("1.5").is_err());
        assert!(parse_probability("abc").is_err());
        assert!(parse_probability("-1/3").is_err());
    }

    #[test]
    fn bias_checks() {
        assert!(Bias::ratios((1, 2), (1, 2), (1, 2)).is_err());
        assert!(Bias::ratios((1, 2), (1, 2), (0, 1)).is_ok());
        assert!(Bias::from_alpha_beta(Ratio::new(3, 5), Ratio::new(3, 10)).is_ok());
        assert!(Bias::from_alpha_beta(Ratio::new(3, 5), Ratio::new(3, 5)).is_err());
    }

    #[test]
    fn order_one_and_two() {
        let g1 = generate(1, &Bias::uniform(), 9).unwrap();
        assert_eq!(g1, Grove::empty(1).unwrap());
        let g2 = generate(2, &Bias::uniform(), 9).unwrap();
        assert_eq!(g2.edge_count(), 2);
        assert!(validate(&g2).is_ok());
        assert_eq!(shuffle_preimage_count(&g2).unwrap(), 1);
        assert!(shuffle_preimage_count(&g1).is_err());
    }

    #[test]
    fn annihilates_pairs() {
        let g = Grove::from_labels(2, [EdgeLabel::a(0, 0), EdgeLabel::b(0, 0)]).unwrap();
        let mut rng = RandomSource::new(1);
        let h = shuffle_once(&g, &Bias::uniform(), &mut rng).unwrap();
        assert!(validate(&h).is_ok());
        assert_eq!(h.order(), 3);
        assert_eq!(h.edge_count(), 4);
    }

    #[test]
    fn deterministic() {
        let bias = Bias::ratios((1, 2), (1, 4), (1, 4)).unwrap();
        assert_eq!(generate(30, &bias, 5).unwrap(), generate(30, &bias, 5).unwrap());
        assert_ne!(generate(30, &bias, 5).unwrap(), generate(30, &bias, 6).unwrap());
    }

    #[test]
    fn distribution_is_uniform() {
        for n in 1..=4 {
            let dist = shuffle_distribution(n, &Bias::uniform()).unwrap();
            let count = 3usize.pow(n * n / 4);
            assert_eq!(dist.len(), count);
            let p = BigRational::new(1.into(), BigInt::from(count));
            assert!(dist.iter().all(|(_, w)| *w == p));
        }
    }
}
