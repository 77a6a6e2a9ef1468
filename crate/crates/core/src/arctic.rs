//! Frozen-region geometry on the triangle `x + y + z = -1`, `x, y, z <= 0`,
//! and the misfit measurements comparing random groves against it.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grove::Grove;
use crate::lattice::{endpoint_magnitudes, Family, Order};
use crate::shuffle::{generate_with, Bias, RandomSource};

/// Numbers usable for the boundary tests: exact rationals or `f64`.
pub trait Scalar:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn ratio(n: i64, d: i64) -> Self;
    /// Half-width of the band treated as zero.
    fn tolerance() -> Self;
    fn abs_value(&self) -> Self;
}

impl Scalar for f64 {
    fn ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }

    fn tolerance() -> Self {
        1e-12
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

impl Scalar for BigRational {
    fn ratio(n: i64, d: i64) -> Self {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tolerance() -> Self {
        BigRational::zero()
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

/// A point of the plane `x + y + z = -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanePoint<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> PlanePoint<T> {
    /// Checks the plane condition (exactly, or within `1e-12` for floats).
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let excess = x.clone() + y.clone() + z.clone() + T::ratio(1, 1);
        if excess.abs_value() > T::tolerance() {
            return Err(Error::OffPlane);
        }
        Ok(Self { x, y, z })
    }

    fn check(&self) -> Result<()> {
        Self::new(self.x.clone(), self.y.clone(), self.z.clone()).map(|_| ())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Position {
    Inside,
    On,
    Outside,
}

fn classify<T: Scalar>(value: T) -> Position {
    let tol = T::tolerance();
    if value > tol {
        Position::Outside
    } else if value < -tol {
        Position::Inside
    } else {
        Position::On
    }
}

/// Position relative to the inscribed circle `x^2 + y^2 + z^2 = 1/2`.
pub fn circle_position<T: Scalar>(pt: &PlanePoint<T>) -> Result<Position> {
    pt.check()?;
    let s = pt.x.clone() * pt.x.clone() + pt.y.clone() * pt.y.clone() + pt.z.clone() * pt.z.clone();
    Ok(classify(s - T::ratio(1, 2)))
}

fn ratio_of<T: Scalar>(r: num_rational::Ratio<i64>) -> T {
    T::ratio(*r.numer(), *r.denom())
}

/// Position relative to the inscribed ellipse
/// `rs + rt + st = (r^2 + s^2 + t^2) / 2` with
/// `r = (beta + gamma) x`, `s = (alpha + gamma) y`, `t = (alpha + beta) z`.
pub fn ellipse_position<T: Scalar>(pt: &PlanePoint<T>, bias: &Bias) -> Result<Position> {
    pt.check()?;
    let (a, b, c) = (bias.alpha(), bias.beta(), bias.gamma());
    let r = ratio_of::<T>(b + c) * pt.x.clone();
    let s = ratio_of::<T>(a + c) * pt.y.clone();
    let t = ratio_of::<T>(a + b) * pt.z.clone();
    let squares = (r.clone() * r.clone() + s.clone() * s.clone() + t.clone() * t.clone()) / T::ratio(2, 1);
    let mixed = r.clone() * s.clone() + r * t.clone() + s * t;
    Ok(classify(squares - mixed))
}

/// Corners of the triangle: `X = (-1, 0, 0)`, `Y = (0, -1, 0)`,
/// `Z = (0, 0, -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Corner {
    X,
    Y,
    Z,
}

impl Corner {
    pub const ALL: [Corner; 3] = [Corner::X, Corner::Y, Corner::Z];

    /// The edge family that freezes in this corner.
    pub fn frozen_family(self) -> Family {
        match self {
            Corner::X => Family::C,
            Corner::Y => Family::B,
            Corner::Z => Family::A,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Corner::X => "x",
            Corner::Y => "y",
            Corner::Z => "z",
        }
    }
}

/// The corner region of a point outside the circle: the one coordinate
/// that is at most `-1/2`.
pub fn sector_of<T: Scalar>(pt: &PlanePoint<T>) -> Result<Corner> {
    if circle_position(pt)? != Position::Outside {
        return Err(Error::NoSector);
    }
    let half = -T::ratio(1, 2);
    let mut found = None;
    for (corner, v) in [(Corner::X, &pt.x), (Corner::Y, &pt.y), (Corner::Z, &pt.z)] {
        if *v <= half {
            if found.is_some() {
                return Err(Error::Internal("two coordinates at most -1/2".into()));
            }
            found = Some(corner);
        }
    }
    found.ok_or(Error::NoSector)
}

/// Points where the ellipse touches the three sides, keyed by the corner
/// opposite to that side.
pub fn tangency_points(bias: &Bias) -> Result<[[f64; 3]; 3]> {
    let [a, b, c] = bias.as_f64();
    let (wx, wy, wz) = (b + c, a + c, a + b);
    if wx <= 0.0 || wy <= 0.0 || wz <= 0.0 {
        return Err(Error::InvalidBias(format!("degenerate bias {bias}")));
    }
    Ok([
        [0.0, -wz / (wy + wz), -wy / (wy + wz)],
        [-wz / (wx + wz), 0.0, -wx / (wx + wz)],
        [-wy / (wx + wy), -wx / (wx + wy), 0.0],
    ])
}

fn side(a: [f64; 3], b: [f64; 3], p: [f64; 3]) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
}

/// Corner region of a point outside the ellipse: the corner cut off by the
/// chord through the two tangency points next to it.
pub fn sector_of_biased(pt: &PlanePoint<f64>, bias: &Bias) -> Result<Corner> {
    if ellipse_position(pt, bias)? != Position::Outside {
        return Err(Error::NoSector);
    }
    let tp = tangency_points(bias)?;
    let p = [pt.x, pt.y, pt.z];
    let corners = [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    for (k, corner) in Corner::ALL.into_iter().enumerate() {
        let (u, v) = (tp[(k + 1) % 3], tp[(k + 2) % 3]);
        let sc = side(u, v, corners[k]);
        let sp = side(u, v, p);
        if sc * sp > 0.0 {
            return Ok(corner);
        }
    }
    Err(Error::NoSector)
}

/// Area of the region inside the ellipse as a fraction of the triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TemperateRatio {
    pub value: f64,
    pub degenerate: bool,
}

pub fn temperate_ratio(bias: &Bias) -> TemperateRatio {
    let [a, b, c] = bias.as_f64();
    let (ab, ac, bc) = (a + b, a + c, b + c);
    if ab == 0.0 || ac == 0.0 || bc == 0.0 {
        return TemperateRatio {
            value: 0.0,
            degenerate: true,
        };
    }
    let den = (ab * ac + ab * bc + ac * bc).powf(1.5);
    TemperateRatio {
        value: PI * ab * ac * bc / den,
        degenerate: false,
    }
}

/// Counts for one region of a misfit measurement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectorTally {
    pub name: &'static str,
    pub outside: usize,
    pub mismatched: usize,
}

impl SectorTally {
    pub fn new(name: &'static str) -> Self {
        Self {
            name,
            outside: 0,
            mismatched: 0,
        }
    }
}

/// Edges (or dominoes) outside the dilated boundary and how many of them
/// disagree with the frozen pattern of their region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MisfitReport {
    pub order: Order,
    pub epsilon: f64,
    pub sectors: Vec<SectorTally>,
    pub outside: usize,
    pub mismatched: usize,
    /// `mismatched / outside`, zero when nothing is outside.
    pub fraction: f64,
}

impl MisfitReport {
    pub(crate) fn from_tallies(order: Order, epsilon: f64, sectors: Vec<SectorTally>) -> Self {
        let outside = sectors.iter().map(|s| s.outside).sum();
        let mismatched = sectors.iter().map(|s| s.mismatched).sum();
        let fraction = if outside == 0 {
            0.0
        } else {
            mismatched as f64 / outside as f64
        };
        Self {
            order,
            epsilon,
            sectors,
            outside,
            mismatched,
            fraction,
        }
    }
}

const CENTER: f64 = -1.0 / 3.0;

/// Shrinks `p` toward the center by `1 + epsilon`; the original point is
/// outside the dilated boundary iff the shrunk one is outside the boundary.
fn undilate(p: [f64; 3], epsilon: f64) -> PlanePoint<f64> {
    let f = |v: f64| CENTER + (v - CENTER) / (1.0 + epsilon);
    PlanePoint {
        x: f(p[0]),
        y: f(p[1]),
        z: f(p[2]),
    }
}

/// Scaled midpoint of every present edge.
pub fn edge_midpoints(g: &Grove) -> impl Iterator<Item = (Family, [f64; 3])> + '_ {
    let n = g.order();
    let scale = 2.0 * n as f64;
    g.edges().map(move |e| {
        let [(a0, b0, c0), (a1, b1, c1)] = endpoint_magnitudes(n, &e);
        let mid = [
            -((a0 + a1) as f64) / scale,
            -((b0 + b1) as f64) / scale,
            -((c0 + c1) as f64) / scale,
        ];
        (e.family, mid)
    })
}

/// Present edges outside the `(1 + epsilon)`-dilated circle (uniform bias)
/// or ellipse, with mismatches against the frozen family of their corner.
pub fn misfit_stats(g: &Grove, epsilon: f64, bias: &Bias) -> Result<MisfitReport> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let uniform = bias.is_uniform();
    if !uniform {
        tangency_points(bias)?;
    }
    let mut tallies: Vec<SectorTally> = Corner::ALL.iter().map(|c| SectorTally::new(c.name())).collect();
    for (family, mid) in edge_midpoints(g) {
        let p = undilate(mid, epsilon);
        let corner = if uniform {
            if circle_position(&p)? != Position::Outside {
                continue;
            }
            sector_of(&p)?
        } else {
            if ellipse_position(&p, bias)? != Position::Outside {
                continue;
            }
            sector_of_biased(&p, bias)?
        };
        let slot = &mut tallies[corner as usize];
        slot.outside += 1;
        if family != corner.frozen_family() {
            slot.mismatched += 1;
        }
    }
    Ok(MisfitReport::from_tallies(g.order(), epsilon, tallies))
}

/// One row of a convergence experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub order: Order,
    pub samples: usize,
    pub epsilon: f64,
    pub mean_misfit: f64,
    pub std_misfit: f64,
    pub seed: u64,
}

/// Random stream used for replicate `index` at `order`.
pub fn replicate_source(seed: u64, order: Order, index: usize) -> RandomSource {
    RandomSource::with_stream(seed, (order as u64) << 32 | index as u64)
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// Mean and sample standard deviation of the misfit fraction over
/// `samples` random groves per order.
pub fn convergence_experiment(
    orders: &[Order],
    samples: usize,
    epsilon: f64,
    bias: &Bias,
    seed: u64,
) -> Result<Vec<ExperimentRow>> {
    if orders.is_empty() {
        return Err(Error::EmptyExperiment("no orders given".into()));
    }
    if samples == 0 {
        return Err(Error::EmptyExperiment("sample count is zero".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    orders
        .iter()
        .map(|&n| {
            let fractions: Result<Vec<f64>> = (0..samples)
                .into_par_iter()
                .map(|idx| {
                    let mut rng = replicate_source(seed, n, idx);
                    let g = generate_with(n, bias, &mut rng)?;
                    Ok(misfit_stats(&g, epsilon, bias)?.fraction)
                })
                .collect();
            let (mean_misfit, std_misfit) = mean_std(&fractions?);
            Ok(ExperimentRow {
                order: n,
                samples,
                epsilon,
                mean_misfit,
                std_misfit,
                seed,
            })
        })
        .collect()
}
