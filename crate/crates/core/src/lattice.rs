//! Coordinates, downward triangles and edge labels of the simplified
//! triangular lattice of order `n`.
//!
//! Vertices are the triples `(i, j, k)` with `i, j, k <= 0` and
//! `i + j + k = -n`. Internally most code works with the magnitudes
//! `(a, b, c) = (-i, -j, -k)`.
//!
//! A downward triangle is named by its bottom vertex `(-p, -q, -(n-p-q))`.
//! Its three sides are the slots `A(p, q)` (horizontal), `B(r, p)` (right)
//! and `C(r, q)` (left) with `r = n - 1 - p - q`. These labels are relative
//! to the corners, so they stay attached to an edge while the grove is
//! shuffled to higher orders.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order of a grove or a lattice.
pub type Order = u32;

/// A vertex of the simplified lattice, stored with signed coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexCoord {
    pub i: i32,
    pub j: i32,
    pub k: i32,
}

impl VertexCoord {
    pub const fn new(i: i32, j: i32, k: i32) -> Self {
        Self { i, j, k }
    }

    /// Builds a vertex from nonnegative magnitudes `(a, b, c)`.
    pub fn from_magnitudes(a: u32, b: u32, c: u32) -> Self {
        Self::new(-(a as i32), -(b as i32), -(c as i32))
    }

    /// Magnitudes `(-i, -j, -k)`; only meaningful for nonpositive coordinates.
    pub fn magnitudes(&self) -> (u32, u32, u32) {
        ((-self.i) as u32, (-self.j) as u32, (-self.k) as u32)
    }

    pub fn sum(&self) -> i32 {
        self.i + self.j + self.k
    }

    /// True when the vertex belongs to the order-`n` lattice.
    pub fn is_valid(&self, n: Order) -> bool {
        self.i <= 0 && self.j <= 0 && self.k <= 0 && self.sum() == -(n as i32)
    }
}

impl fmt::Display for VertexCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.k)
    }
}

/// A downward triangle, named by the magnitudes of its bottom vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriangleId {
    pub p: u32,
    pub q: u32,
}

impl TriangleId {
    pub const fn new(p: u32, q: u32) -> Self {
        Self { p, q }
    }

    pub fn is_valid(&self, n: Order) -> bool {
        n >= 1 && self.p + self.q < n
    }

    /// `r = n - 1 - p - q`, the distance of the triangle from the top side.
    pub fn r(&self, n: Order) -> u32 {
        n - 1 - self.p - self.q
    }

    /// Bottom vertex `(-p, -q, -(n-p-q))`.
    pub fn bottom(&self, n: Order) -> VertexCoord {
        VertexCoord::from_magnitudes(self.p, self.q, n - self.p - self.q)
    }
}

/// The three edge families. `A` edges are horizontal, `B` and `C` are the
/// two diagonal directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A, Family::B, Family::C];

    pub fn index(self) -> usize {
        match self {
            Family::A => 0,
            Family::B => 1,
            Family::C => 2,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::C => 'c',
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
        };
        f.write_str(s)
    }
}

/// A long-edge label: `A(p, q)`, `B(r, p)` or `C(r, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub family: Family,
    pub first: u32,
    pub second: u32,
}

impl EdgeLabel {
    pub const fn new(family: Family, first: u32, second: u32) -> Self {
        Self {
            family,
            first,
            second,
        }
    }

    pub const fn a(p: u32, q: u32) -> Self {
        Self::new(Family::A, p, q)
    }

    pub const fn b(r: u32, p: u32) -> Self {
        Self::new(Family::B, r, p)
    }

    pub const fn c(r: u32, q: u32) -> Self {
        Self::new(Family::C, r, q)
    }

    pub fn in_range(&self, n: Order) -> bool {
        n >= 1 && self.first + self.second < n
    }

    /// Dense index of the label inside its family, independent of the order.
    pub fn index(&self) -> usize {
        label_index(self.first, self.second)
    }

    /// The downward triangle of order `n` that owns this label as a slot.
    pub fn owner(&self, n: Order) -> Result<TriangleId> {
        check_label(n, self)?;
        let (f, s) = (self.first, self.second);
        Ok(match self.family {
            Family::A => TriangleId::new(f, s),
            Family::B => TriangleId::new(s, n - 1 - f - s),
            Family::C => TriangleId::new(n - 1 - f - s, s),
        })
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.family, self.first, self.second)
    }
}

/// Index of the pair `(x, y)` in the triangular enumeration by `x + y`.
pub fn label_index(x: u32, y: u32) -> usize {
    let s = (x + y) as usize;
    s * (s + 1) / 2 + y as usize
}

/// Inverse of [`label_index`].
pub fn label_from_index(idx: usize) -> (u32, u32) {
    // Largest s with s(s+1)/2 <= idx.
    let mut s = (((8 * idx + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
    while (s + 1) * (s + 2) / 2 <= idx {
        s += 1;
    }
    while s * (s + 1) / 2 > idx {
        s -= 1;
    }
    let y = idx - s * (s + 1) / 2;
    ((s - y) as u32, y as u32)
}

/// Number of labels per family at order `n`, which is also the number of
/// downward triangles.
pub fn labels_per_family(n: Order) -> usize {
    let n = n as usize;
    n * (n + 1) / 2
}

/// Number of lattice vertices at order `n`.
pub fn vertex_count(n: Order) -> usize {
    let n = n as usize;
    (n + 1) * (n + 2) / 2
}

/// Dense index of a vertex given by magnitudes `(a, b, _)`.
pub fn vertex_index(a: u32, b: u32) -> usize {
    label_index(a, b)
}

pub(crate) fn check_order(n: Order) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidOrder(n, 1))
    } else {
        Ok(())
    }
}

pub(crate) fn check_label(n: Order, e: &EdgeLabel) -> Result<()> {
    check_order(n)?;
    if e.in_range(n) {
        Ok(())
    } else {
        Err(Error::LabelOutOfRange { label: *e, order: n })
    }
}

fn check_triangle(n: Order, t: TriangleId) -> Result<()> {
    check_order(n)?;
    if t.is_valid(n) {
        Ok(())
    } else {
        Err(Error::InvalidTriangle {
            order: n,
            p: t.p,
            q: t.q,
        })
    }
}

/// All downward triangles of order `n`, ordered by `p + q` then `q`.
pub fn downward_triangles(n: Order) -> Result<Vec<TriangleId>> {
    check_order(n)?;
    Ok((0..labels_per_family(n))
        .map(|idx| {
            let (p, q) = label_from_index(idx);
            TriangleId::new(p, q)
        })
        .collect())
}

/// The `A`, `B` and `C` slots of triangle `t`.
pub fn triangle_slots(n: Order, t: TriangleId) -> Result<[EdgeLabel; 3]> {
    check_triangle(n, t)?;
    let r = t.r(n);
    Ok([EdgeLabel::a(t.p, t.q), EdgeLabel::b(r, t.p), EdgeLabel::c(r, t.q)])
}

/// Endpoint magnitudes of a label, assuming it is in range.
pub(crate) fn endpoint_magnitudes(n: Order, e: &EdgeLabel) -> [(u32, u32, u32); 2] {
    let (f, s) = (e.first, e.second);
    match e.family {
        Family::A => {
            let c = n - f - s;
            [(f, s + 1, c - 1), (f + 1, s, c - 1)]
        }
        Family::B => {
            let (r, p) = (f, s);
            let q = n - 1 - r - p;
            [(p + 1, q, r), (p, q, r + 1)]
        }
        Family::C => {
            let (r, q) = (f, s);
            let p = n - 1 - r - q;
            [(p, q, r + 1), (p, q + 1, r)]
        }
    }
}

/// The two endpoints of an edge label.
///
/// `A(p, q)` runs from the top-left to the top-right corner of its triangle,
/// `B` from the top-right corner to the bottom and `C` from the bottom to the
/// top-left corner.
pub fn label_endpoints(n: Order, e: EdgeLabel) -> Result<(VertexCoord, VertexCoord)> {
    check_label(n, &e)?;
    let [(a0, b0, c0), (a1, b1, c1)] = endpoint_magnitudes(n, &e);
    Ok((
        VertexCoord::from_magnitudes(a0, b0, c0),
        VertexCoord::from_magnitudes(a1, b1, c1),
    ))
}

/// Scales a vertex into the triangle `x + y + z = -1`, `x, y, z <= 0`.
pub fn scale_vertex(n: Order, v: VertexCoord) -> Result<[f64; 3]> {
    check_order(n)?;
    if !v.is_valid(n) {
        return Err(Error::InvalidVertex {
            order: n,
            i: v.i,
            j: v.j,
            k: v.k,
        });
    }
    let n = n as f64;
    Ok([v.i as f64 / n, v.j as f64 / n, v.k as f64 / n])
}
