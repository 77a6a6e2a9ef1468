//! Exact creation rates and edge probabilities.
//!
//! For groves, `E(-i,-j,-k)` is the expected face exponent and is the
//! coefficient of `x^i y^j z^k` in `F = 1/g` with
//! `g = 1 + xyz - alpha(x + yz) - beta(y + xz) - gamma(z + xy)`.
//! The probability `p(-i,-j,-k)` of a horizontal edge is the coefficient of
//! `G = (alpha + beta) z^2 F / (1 - z)`.
//!
//! Grid points relate to a triangle `(p, q)` of order `n` through the
//! magnitudes `(p, q, n - 1 - p - q)` for `E` and `(p, q, n - p - q)` for
//! the horizontal-edge probability.
//!
//! For Aztec diamonds, `E_n(i, j)` is the expected exponent of face `(i, j)`
//! in `g_{0,0,n}` and `p_n(i, j)` is the probability of a north-going domino
//! centered at `(i, j + 1/2)`; `p` is read off
//! `(z/2) / ((1 - yz)(1 + z^2 - (z/2)(x + 1/x + y + 1/y)))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{labels_per_family, Order};
use crate::recurrence_poly::{enumerate_tilings, face_degree};
use crate::shuffle::Bias;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn tetra(t: usize) -> usize {
    t * (t + 1) * (t + 2) / 6
}

/// Exact values on `{(i, j, k) : i, j, k >= 0, i + j + k <= depth}`,
/// indexed by magnitudes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGrid3 {
    depth: u32,
    data: Vec<BigRational>,
}

impl RationalGrid3 {
    pub fn zeros(depth: u32) -> Self {
        Self {
            depth,
            data: vec![BigRational::zero(); tetra(depth as usize + 1)],
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    fn slot(i: u32, j: u32, k: u32) -> usize {
        let t = (i + j + k) as usize;
        tetra(t) + crate::lattice::label_index(j, k)
    }

    /// Value at magnitudes `(i, j, k)`; `None` beyond the depth.
    pub fn get(&self, i: u32, j: u32, k: u32) -> Option<&BigRational> {
        (i + j + k <= self.depth).then(|| &self.data[Self::slot(i, j, k)])
    }

    /// Value at magnitudes, zero when any index is negative.
    fn at(&self, i: i64, j: i64, k: i64) -> BigRational {
        if i < 0 || j < 0 || k < 0 {
            BigRational::zero()
        } else {
            self.data[Self::slot(i as u32, j as u32, k as u32)].clone()
        }
    }

    /// Value at signed coordinates `(i, j, k)` with `i, j, k <= 0`.
    pub fn get_signed(&self, i: i32, j: i32, k: i32) -> Option<&BigRational> {
        if i > 0 || j > 0 || k > 0 {
            return None;
        }
        self.get((-i) as u32, (-j) as u32, (-k) as u32)
    }

    fn set(&mut self, i: u32, j: u32, k: u32, v: BigRational) {
        let s = Self::slot(i, j, k);
        self.data[s] = v;
    }

    /// All points in order of total degree.
    pub fn points(&self) -> impl Iterator<Item = (u32, u32, u32)> {
        let depth = self.depth;
        (0..=depth).flat_map(move |t| {
            (0..=t).flat_map(move |j| (0..=t - j).map(move |k| (t - j - k, j, k)))
        })
    }

    /// Creation rates of the order-`n` triangles, indexed like
    /// [`labels_per_family`].
    pub fn e_slice(&self, n: Order) -> Option<Vec<BigRational>> {
        if n == 0 || n - 1 > self.depth {
            return None;
        }
        Some(
            (0..labels_per_family(n))
                .map(|idx| {
                    let (p, q) = crate::lattice::label_from_index(idx);
                    self.get(p, q, n - 1 - p - q).unwrap().clone()
                })
                .collect(),
        )
    }

    /// Horizontal-edge probabilities of the order-`n` triangles.
    pub fn p_slice(&self, n: Order) -> Option<Vec<BigRational>> {
        if n == 0 || n > self.depth {
            return None;
        }
        Some(
            (0..labels_per_family(n))
                .map(|idx| {
                    let (p, q) = crate::lattice::label_from_index(idx);
                    self.get(p, q, n - p - q).unwrap().clone()
                })
                .collect(),
        )
    }
}

/// A polynomial in `x, y, z` with exact coefficients, keyed by exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriPoly {
    terms: BTreeMap<(u32, u32, u32), BigRational>,
}

/// The denominator `g` of the creation-rate generating function.
pub type DenominatorPoly = TriPoly;

impl TriPoly {
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32, u32), BigRational)>>(terms: I) -> Self {
        let mut out = Self::default();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: (u32, u32, u32), c: BigRational) {
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// `1 + xyz - alpha(x + yz) - beta(y + xz) - gamma(z + xy)`.
    pub fn grove(bias: &Bias) -> Self {
        let [a, b, c] = bias.as_big();
        Self::from_terms([
            ((0, 0, 0), BigRational::one()),
            ((1, 1, 1), BigRational::one()),
            ((1, 0, 0), -a.clone()),
            ((0, 1, 1), -a),
            ((0, 1, 0), -b.clone()),
            ((1, 0, 1), -b),
            ((0, 0, 1), -c.clone()),
            ((1, 1, 0), -c),
        ])
    }

    pub fn coefficient(&self, e: (u32, u32, u32)) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c * s)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term((a.0 + b.0, a.1 + b.1, a.2 + b.2), ca * cb);
            }
        }
        out
    }
}

/// Power series `1 / den`, truncated at total degree `depth`.
pub fn series_invert(den: &TriPoly, depth: u32) -> Result<RationalGrid3> {
    let c0 = den.coefficient((0, 0, 0));
    if c0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let inv0 = c0.recip();
    let rest: Vec<((i64, i64, i64), BigRational)> = den
        .terms()
        .filter(|(e, _)| **e != (0, 0, 0))
        .map(|(e, c)| ((e.0 as i64, e.1 as i64, e.2 as i64), c.clone()))
        .collect();
    let mut out = RationalGrid3::zeros(depth);
    let points: Vec<_> = out.points().collect();
    for (i, j, k) in points {
        let mut acc = if (i, j, k) == (0, 0, 0) {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        for ((a, b, c), coeff) in &rest {
            let (x, y, z) = (i as i64 - a, j as i64 - b, k as i64 - c);
            if x >= 0 && y >= 0 && z >= 0 {
                acc -= coeff * out.at(x, y, z);
            }
        }
        out.set(i, j, k, acc * &inv0);
    }
    Ok(out)
}

/// Creation rates by the shuffle recurrence, case by case: the interior
/// rule, the three faces, the three axes and the origin.
pub fn grove_e_recurrence(bias: &Bias, depth: u32) -> RationalGrid3 {
    let [al, be, ga] = bias.as_big();
    let mut g = RationalGrid3::zeros(depth);
    let points: Vec<_> = g.points().collect();
    for (i, j, k) in points {
        let (si, sj, sk) = (i as i64, j as i64, k as i64);
        let e = |x: i64, y: i64, z: i64| g.at(x, y, z);
        let v = match (i > 0, j > 0, k > 0) {
            (false, false, false) => BigRational::one(),
            (true, false, false) => &al * e(si - 1, 0, 0),
            (false, true, false) => &be * e(0, sj - 1, 0),
            (false, false, true) => &ga * e(0, 0, sk - 1),
            (true, true, false) => {
                &al * e(si - 1, sj, 0) + &be * e(si, sj - 1, 0) + &ga * e(si - 1, sj - 1, 0)
            }
            (true, false, true) => {
                &al * e(si - 1, 0, sk) + &be * e(si - 1, 0, sk - 1) + &ga * e(si, 0, sk - 1)
            }
            (false, true, true) => {
                &al * e(0, sj - 1, sk - 1) + &be * e(0, sj - 1, sk) + &ga * e(0, sj, sk - 1)
            }
            (true, true, true) => {
                -e(si - 1, sj - 1, sk - 1)
                    + &al * (e(si - 1, sj, sk) + e(si, sj - 1, sk - 1))
                    + &be * (e(si, sj - 1, sk) + e(si - 1, sj, sk - 1))
                    + &ga * (e(si, sj, sk - 1) + e(si - 1, sj - 1, sk))
            }
        };
        g.set(i, j, k, v);
    }
    g
}

/// Creation rates computed by the recurrence and by series inversion; the
/// two must agree exactly.
pub fn grove_e(bias: &Bias, depth: u32) -> Result<RationalGrid3> {
    let dp = grove_e_recurrence(bias, depth);
    let series = series_invert(&TriPoly::grove(bias), depth)?;
    if dp != series {
        return Err(Error::Internal(
            "creation-rate recurrence disagrees with series inversion".into(),
        ));
    }
    Ok(dp)
}

/// Horizontal-edge probabilities, the coefficients of
/// `(alpha + beta) z^2 F / (1 - z)`.
pub fn grove_p(bias: &Bias, depth: u32) -> Result<RationalGrid3> {
    if depth < 2 {
        return Err(Error::DepthTooSmall { depth, min: 2 });
    }
    let f = grove_e(bias, depth)?;
    let [al, be, _] = bias.as_big();
    let w = al + be;
    let mut out = RationalGrid3::zeros(depth);
    let points: Vec<_> = out.points().collect();
    for (i, j, k) in points {
        if k < 2 {
            continue;
        }
        let v = out.at(i as i64, j as i64, k as i64 - 1) + &w * f.at(i as i64, j as i64, k as i64 - 2);
        out.set(i, j, k, v);
    }
    Ok(out)
}

/// Values `(i, j) -> value` per order `0..=n_max`, zero when absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AztecTable {
    layers: Vec<BTreeMap<(i32, i32), BigRational>>,
}

impl AztecTable {
    pub fn n_max(&self) -> Order {
        (self.layers.len() - 1) as Order
    }

    pub fn get(&self, n: Order, i: i32, j: i32) -> BigRational {
        self.layers
            .get(n as usize)
            .and_then(|l| l.get(&(i, j)))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Entries of order `n` with `|i| + |j| <= n`, in row order.
    pub fn layer(&self, n: Order) -> Vec<((i32, i32), BigRational)> {
        let n = n as i32;
        let mut out = Vec::new();
        for j in (-n..=n).rev() {
            for i in -(n - j.abs())..=(n - j.abs()) {
                out.push(((i, j), self.get(n as Order, i, j)));
            }
        }
        out
    }
}

/// Expected face exponents `1 - deg(i, j)` over all tilings of order `n`.
pub fn aztec_face_expectations(n: Order) -> Result<BTreeMap<(i32, i32), BigRational>> {
    let tilings = enumerate_tilings(n)?;
    let ni = n as i32;
    let mut out = BTreeMap::new();
    for i in -ni..=ni {
        let span = ni - i.abs();
        for j in -span..=span {
            let total: i64 = tilings
                .iter()
                .map(|t| 1 - face_degree(t, i, j) as i64)
                .sum();
            out.insert((i, j), rat(total, tilings.len() as i64));
        }
    }
    Ok(out)
}

/// Aztec creation rates `E_n(i, j)` for `n <= n_max`.
///
/// `E_0` is the single face of the empty diamond, `E_1` and `E_2` come from
/// tiling enumeration, and later orders from
/// `E_{n+1} + E_{n-1} = (1/2)(sum of the four neighbors of E_n)`.
pub fn aztec_e(n_max: Order) -> Result<AztecTable> {
    let mut layers = vec![BTreeMap::from([((0, 0), BigRational::one())])];
    for n in 1..=n_max.min(2) {
        layers.push(aztec_face_expectations(n)?);
    }
    let half = rat(1, 2);
    for n in 2..n_max {
        let ni = n as i32 + 1;
        let mut next = BTreeMap::new();
        for i in -ni..=ni {
            let span = ni - i.abs();
            for j in -span..=span {
                let cur = &layers[n as usize];
                let get = |l: &BTreeMap<(i32, i32), BigRational>, a, b| {
                    l.get(&(a, b)).cloned().unwrap_or_else(BigRational::zero)
                };
                let nb = get(cur, i - 1, j) + get(cur, i + 1, j) + get(cur, i, j - 1) + get(cur, i, j + 1);
                let v = &half * nb - get(&layers[n as usize - 1], i, j);
                next.insert((i, j), v);
            }
        }
        layers.push(next);
    }
    Ok(AztecTable { layers })
}

type Laurent2 = BTreeMap<(i32, i32), BigRational>;

fn laurent_mul(a: &Laurent2, b: &Laurent2) -> Laurent2 {
    let mut out = Laurent2::new();
    for ((i, j), x) in a {
        for ((k, l), y) in b {
            let slot = out.entry((i + k, j + l)).or_insert_with(BigRational::zero);
            *slot += x * y;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Inverts `sum_m den[m] z^m` with Laurent-polynomial coefficients in
/// `x, y`, up to `z^depth`. Requires `den[0] = 1`.
pub fn laurent_series_invert(den: &[Laurent2], depth: usize) -> Result<Vec<Laurent2>> {
    let one = Laurent2::from([((0, 0), BigRational::one())]);
    if den.first() != Some(&one) {
        return Err(Error::ZeroConstantTerm);
    }
    let mut out: Vec<Laurent2> = vec![one];
    for n in 1..=depth {
        let mut acc = Laurent2::new();
        for m in 1..den.len().min(n + 1) {
            for (key, v) in laurent_mul(&den[m], &out[n - m]) {
                *acc.entry(key).or_insert_with(BigRational::zero) -= v;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.push(acc);
    }
    Ok(out)
}

/// North-going domino probabilities `p_n(i, j)` for `n <= n_max`, as
/// coefficients of the Aztec generating function.
pub fn aztec_p(n_max: Order) -> Result<AztecTable> {
    let half = rat(1, 2);
    let z1: Laurent2 = [(-1, 0), (1, 0), (0, -1), (0, 1)]
        .into_iter()
        .map(|k| (k, -&half))
        .collect();
    // (1 - yz)(1 - (z/2)L + z^2)
    let d0 = Laurent2::from([((0, 0), BigRational::one())]);
    let mut d1 = z1.clone();
    d1.insert((0, 1), rat(-1, 2) - BigRational::one());
    let mut d2 = laurent_mul(&Laurent2::from([((0, 1), -BigRational::one())]), &z1);
    *d2.entry((0, 0)).or_insert_with(BigRational::zero) += BigRational::one();
    d2.retain(|_, v| !v.is_zero());
    let d3 = Laurent2::from([((0, 1), -BigRational::one())]);
    let inv = laurent_series_invert(&[d0, d1, d2, d3], n_max as usize)?;
    let mut layers = vec![Laurent2::new()];
    for n in 1..=n_max as usize {
        layers.push(
            inv[n - 1]
                .iter()
                .map(|(k, v)| (*k, v * &half))
                .collect(),
        );
    }
    Ok(AztecTable { layers })
}

/// The same probabilities from `p_n(i, j) = p_{n-1}(i, j-1) + (1/2) E_{n-1}(i, j)`
/// on positions with `i + j = n - 1 (mod 2)`; other positions are zero.
pub fn aztec_p_from_rates(e: &AztecTable, n_max: Order) -> AztecTable {
    let half = rat(1, 2);
    let mut layers = vec![Laurent2::new()];
    for n in 1..=n_max as i32 {
        let mut next = Laurent2::new();
        for i in -n..=n {
            let span = n - i.abs();
            for j in -span..=span {
                if (i + j - (n - 1)).rem_euclid(2) != 0 {
                    continue;
                }
                let prev = layers[n as usize - 1]
                    .get(&(i, j - 1))
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                let v = prev + &half * e.get(n as Order - 1, i, j);
                if !v.is_zero() {
                    next.insert((i, j), v);
                }
            }
        }
        layers.push(next);
    }
    AztecTable { layers }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_values() {
        let e = grove_e(&Bias::uniform(), 6).unwrap();
        assert_eq!(e.get(0, 0, 0).unwrap(), &rat(1, 1));
        assert_eq!(e.get(1, 0, 0).unwrap(), &rat(1, 3));
        assert_eq!(e.get(1, 1, 1).unwrap(), &rat(-1, 9));
        assert_eq!(e.get_signed(-1, -1, -1).unwrap(), &rat(-1, 9));
        let p = grove_p(&Bias::uniform(), 6).unwrap();
        assert_eq!(p.get(0, 0, 2).unwrap(), &rat(2, 3));
        assert_eq!(p.get(0, 0, 3).unwrap(), &rat(8, 9));
        assert_eq!(p.get(0, 0, 1).unwrap(), &rat(0, 1));
        assert!(grove_p(&Bias::uniform(), 1).is_err());
    }

    #[test]
    fn zero_constant_term() {
        let den = TriPoly::from_terms([((1, 0, 0), rat(1, 1))]);
        assert_eq!(series_invert(&den, 3), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn aztec_small_values() {
        let p = aztec_p(3).unwrap();
        assert_eq!(p.get(1, 0, 0), rat(1, 2));
        assert_eq!(p.get(2, 0, 1), rat(3, 4));
        assert_eq!(p.get(2, 1, 0), rat(1, 4));
        assert_eq!(p.get(2, -1, 0), rat(1, 4));
        assert_eq!(p.get(2, 0, -1), rat(1, 4));
        let e = aztec_e(6).unwrap();
        assert_eq!(e.get(1, 0, 0), rat(-1, 1));
        assert_eq!(e.get(1, 1, 0), rat(1, 2));
        assert_eq!(aztec_p_from_rates(&e, 6), aztec_p(6).unwrap());
    }
}
