//! Groves on the simplified lattice: storage, validation, frozen edges and
//! per-grove counts.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dsu::UnionFind;
use crate::error::{Error, Result};
use crate::lattice::{
    check_label, check_order, downward_triangles, endpoint_magnitudes, label_from_index,
    labels_per_family, triangle_slots, vertex_count, vertex_index, EdgeLabel, Family, Order,
    TriangleId, VertexCoord,
};

/// A set of long edges on the order-`n` lattice.
///
/// Each family is a dense bit vector indexed by [`EdgeLabel::index`], so the
/// same label keeps its slot when the order grows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grove {
    pub(crate) order: Order,
    pub(crate) bits: [Vec<bool>; 3],
}

impl Grove {
    /// The edgeless grove of order `n`. At `n = 1` this is the unique grove.
    pub fn empty(n: Order) -> Result<Self> {
        check_order(n)?;
        let len = labels_per_family(n);
        Ok(Self {
            order: n,
            bits: [vec![false; len], vec![false; len], vec![false; len]],
        })
    }

    pub fn from_labels<I: IntoIterator<Item = EdgeLabel>>(n: Order, labels: I) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for e in labels {
            g.insert(e)?;
        }
        Ok(g)
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn insert(&mut self, e: EdgeLabel) -> Result<()> {
        check_label(self.order, &e)?;
        self.bits[e.family.index()][e.index()] = true;
        Ok(())
    }

    pub fn remove(&mut self, e: EdgeLabel) -> Result<()> {
        check_label(self.order, &e)?;
        self.bits[e.family.index()][e.index()] = false;
        Ok(())
    }

    pub fn contains(&self, e: EdgeLabel) -> bool {
        e.in_range(self.order) && self.bits[e.family.index()][e.index()]
    }

    pub(crate) fn has(&self, f: Family, first: u32, second: u32) -> bool {
        self.bits[f.index()][crate::lattice::label_index(first, second)]
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|b| b.iter().filter(|&&x| x).count()).sum()
    }

    /// Present labels of one family, as `(first, second)` pairs sorted
    /// lexicographically.
    pub fn labels(&self, family: Family) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self.bits[family.index()]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(idx, _)| label_from_index(idx))
            .collect();
        out.sort_unstable();
        out
    }

    /// All present labels, family by family.
    pub fn edges(&self) -> impl Iterator<Item = EdgeLabel> + '_ {
        Family::ALL.into_iter().flat_map(move |f| {
            self.bits[f.index()]
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(move |(idx, _)| {
                    let (x, y) = label_from_index(idx);
                    EdgeLabel::new(f, x, y)
                })
        })
    }

    pub fn to_json_value(&self) -> GroveJson {
        let pairs = |f| self.labels(f).into_iter().map(|(x, y)| [x, y]).collect();
        GroveJson {
            order: self.order,
            a: pairs(Family::A),
            b: pairs(Family::B),
            c: pairs(Family::C),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("grove serializes")
    }

    /// Parses the canonical JSON form. Only label ranges are checked here;
    /// use [`validate`] for the structural conditions.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: GroveJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidGrove(e.to_string()))?;
        Self::try_from(raw)
    }
}

impl fmt::Debug for Grove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.edges().map(|e| e.to_string()).collect();
        write!(f, "Grove(order {}, [{}])", self.order, labels.join(" "))
    }
}

/// Interchange form: `{"order": n, "a": [[p,q],..], "b": [[r,p],..], "c": [[r,q],..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroveJson {
    pub order: Order,
    pub a: Vec<[u32; 2]>,
    pub b: Vec<[u32; 2]>,
    pub c: Vec<[u32; 2]>,
}

impl TryFrom<GroveJson> for Grove {
    type Error = Error;

    fn try_from(raw: GroveJson) -> Result<Self> {
        let mut g = Grove::empty(raw.order)?;
        for (family, list) in [(Family::A, &raw.a), (Family::B, &raw.b), (Family::C, &raw.c)] {
            for &[x, y] in list {
                g.insert(EdgeLabel::new(family, x, y))?;
            }
        }
        Ok(g)
    }
}

/// Slots of one downward triangle that are present in a grove.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TriangleConfig {
    pub triangle: TriangleId,
    /// Presence of the `A`, `B` and `C` slots.
    pub present: [bool; 3],
}

impl TriangleConfig {
    pub fn count(&self) -> usize {
        self.present.iter().filter(|&&b| b).count()
    }

    pub fn families(&self) -> Vec<Family> {
        Family::ALL
            .into_iter()
            .filter(|f| self.present[f.index()])
            .collect()
    }
}

pub fn triangle_config(g: &Grove, t: TriangleId) -> Result<TriangleConfig> {
    let slots = triangle_slots(g.order, t)?;
    Ok(TriangleConfig {
        triangle: t,
        present: slots.map(|e| g.contains(e)),
    })
}

/// Numbers of downward triangles with zero, one and two present slots.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeCounts {
    pub zero: usize,
    pub one: usize,
    pub two: usize,
    /// Triangles with all three slots present; zero in any grove.
    pub three: usize,
}

pub fn edge_counts(g: &Grove) -> EdgeCounts {
    let n = g.order;
    let mut out = EdgeCounts::default();
    for p in 0..n {
        for q in 0..n - p {
            let r = n - 1 - p - q;
            let k = g.has(Family::A, p, q) as u8
                + g.has(Family::B, r, p) as u8
                + g.has(Family::C, r, q) as u8;
            match k {
                0 => out.zero += 1,
                1 => out.one += 1,
                2 => out.two += 1,
                _ => out.three += 1,
            }
        }
    }
    out
}

/// Frozen labels of each family, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrozenEdges {
    pub a: Vec<(u32, u32)>,
    pub b: Vec<(u32, u32)>,
    pub c: Vec<(u32, u32)>,
}

impl FrozenEdges {
    pub fn family(&self, f: Family) -> &[(u32, u32)] {
        match f {
            Family::A => &self.a,
            Family::B => &self.b,
            Family::C => &self.c,
        }
    }

    pub fn len(&self) -> usize {
        self.a.len() + self.b.len() + self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Labels `(x, y)` of family `f` such that every `(x', y')` with `x' <= x`
/// and `y' <= y` is present.
pub(crate) fn frozen_family(g: &Grove, f: Family) -> Vec<(u32, u32)> {
    let n = g.order as usize;
    let bits = &g.bits[f.index()];
    let mut frozen = vec![false; bits.len()];
    let mut out = Vec::new();
    for s in 0..n {
        for y in 0..=s {
            let x = s - y;
            let idx = crate::lattice::label_index(x as u32, y as u32);
            let left = x == 0 || frozen[crate::lattice::label_index(x as u32 - 1, y as u32)];
            let down = y == 0 || frozen[crate::lattice::label_index(x as u32, y as u32 - 1)];
            if bits[idx] && left && down {
                frozen[idx] = true;
                out.push((x as u32, y as u32));
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn frozen_edges(g: &Grove) -> FrozenEdges {
    FrozenEdges {
        a: frozen_family(g, Family::A),
        b: frozen_family(g, Family::B),
        c: frozen_family(g, Family::C),
    }
}

/// Connected components of the lattice graph spanned by the present edges.
#[derive(Clone, Debug)]
pub struct Components {
    order: Order,
    root: Vec<usize>,
    count: usize,
}

impl Components {
    pub fn count(&self) -> usize {
        self.count
    }

    /// Component representative of the vertex with magnitudes `(a, b, _)`.
    pub fn component_of(&self, v: VertexCoord) -> Result<usize> {
        if !v.is_valid(self.order) {
            return Err(Error::InvalidVertex {
                order: self.order,
                i: v.i,
                j: v.j,
                k: v.k,
            });
        }
        let (a, b, _) = v.magnitudes();
        Ok(self.root[vertex_index(a, b)])
    }

    pub fn same(&self, u: VertexCoord, v: VertexCoord) -> Result<bool> {
        Ok(self.component_of(u)? == self.component_of(v)?)
    }

    /// Components as sorted vertex lists, ordered by their first vertex.
    pub fn groups(&self) -> Vec<Vec<VertexCoord>> {
        let n = self.order;
        let mut by_root: std::collections::BTreeMap<usize, Vec<VertexCoord>> = Default::default();
        for a in 0..=n {
            for b in 0..=n - a {
                by_root
                    .entry(self.root[vertex_index(a, b)])
                    .or_default()
                    .push(VertexCoord::from_magnitudes(a, b, n - a - b));
            }
        }
        let mut out: Vec<Vec<VertexCoord>> = by_root
            .into_values()
            .map(|mut v| {
                v.sort_unstable();
                v
            })
            .collect();
        out.sort();
        out
    }
}

fn edge_vertex_indices(n: Order, e: &EdgeLabel) -> (usize, usize) {
    let [(a0, b0, _), (a1, b1, _)] = endpoint_magnitudes(n, e);
    (vertex_index(a0, b0), vertex_index(a1, b1))
}

pub fn components(g: &Grove) -> Components {
    let n = g.order;
    let mut uf = UnionFind::new(vertex_count(n));
    for e in g.edges() {
        let (u, v) = edge_vertex_indices(n, &e);
        uf.union(u, v);
    }
    let root = (0..uf.len()).map(|x| uf.find(x)).collect();
    Components {
        order: n,
        root,
        count: uf.set_count(),
    }
}

/// A reason a subgraph fails to be a grove.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    FullTriangle(TriangleId),
    EdgeCount { expected: usize, found: usize },
    Cycle(EdgeLabel),
    PairSplit { corner: VertexCoord, distance: u32 },
    ClassesMerged { first: VertexCoord, second: VertexCoord },
    MidpointsSplit,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FullTriangle(t) => write!(f, "triangle ({}, {}) has three edges", t.p, t.q),
            Violation::EdgeCount { expected, found } => {
                write!(f, "expected {expected} edges, found {found}")
            }
            Violation::Cycle(e) => write!(f, "edge {e} closes a cycle"),
            Violation::PairSplit { corner, distance } => write!(
                f,
                "boundary vertices at distance {distance} from corner {corner} are not connected"
            ),
            Violation::ClassesMerged { first, second } => {
                write!(f, "boundary vertices {first} and {second} must not be connected")
            }
            Violation::MidpointsSplit => f.write_str("side midpoints are not connected"),
        }
    }
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidGrove(v.to_string())),
        }
    }
}

/// Which boundary condition a group of boundary vertices encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ClassKind {
    Corner,
    Pair { corner: (u32, u32, u32), distance: u32 },
    Midpoints,
}

/// A group of boundary vertices (as magnitudes) that must form exactly one
/// component, separate from every other group.
#[derive(Clone, Debug)]
pub(crate) struct BoundaryClass {
    pub kind: ClassKind,
    pub members: Vec<(u32, u32, u32)>,
}

/// Each corner alone, each pair of vertices at distance `d < n/2` from a
/// corner, and at even order the three side midpoints together.
pub(crate) fn boundary_classes(n: Order) -> Vec<BoundaryClass> {
    let corners = [(n, 0, 0), (0, n, 0), (0, 0, n)];
    let mut classes: Vec<BoundaryClass> = corners
        .iter()
        .map(|&c| BoundaryClass {
            kind: ClassKind::Corner,
            members: vec![c],
        })
        .collect();
    let mut d = 1;
    while 2 * d < n {
        let pairs = [
            [(n - d, 0, d), (n - d, d, 0)],
            [(0, n - d, d), (d, n - d, 0)],
            [(d, 0, n - d), (0, d, n - d)],
        ];
        for (corner, pair) in corners.iter().zip(pairs) {
            classes.push(BoundaryClass {
                kind: ClassKind::Pair {
                    corner: *corner,
                    distance: d,
                },
                members: pair.to_vec(),
            });
        }
        d += 1;
    }
    if n % 2 == 0 {
        let m = n / 2;
        classes.push(BoundaryClass {
            kind: ClassKind::Midpoints,
            members: vec![(m, m, 0), (m, 0, m), (0, m, m)],
        });
    }
    classes
}

fn mag(v: (u32, u32, u32)) -> VertexCoord {
    VertexCoord::from_magnitudes(v.0, v.1, v.2)
}

/// Checks every grove condition and reports all violations found.
pub fn validate(g: &Grove) -> ValidationReport {
    let n = g.order;
    let mut violations = Vec::new();

    let counts = edge_counts(g);
    if counts.three > 0 {
        for t in downward_triangles(n).expect("order is positive") {
            if triangle_config(g, t).expect("triangle in range").count() == 3 {
                violations.push(Violation::FullTriangle(t));
            }
        }
    }

    let expected = (n as usize * n as usize) / 2;
    let found = g.edge_count();
    if found != expected {
        violations.push(Violation::EdgeCount { expected, found });
    }

    let mut uf = UnionFind::new(vertex_count(n));
    for e in g.edges() {
        let (u, v) = edge_vertex_indices(n, &e);
        if !uf.union(u, v) {
            violations.push(Violation::Cycle(e));
        }
    }

    let classes = boundary_classes(n);
    let idx = |(a, b, _): (u32, u32, u32)| vertex_index(a, b);
    let mut owner: std::collections::HashMap<usize, usize> = Default::default();
    for (ci, class) in classes.iter().enumerate() {
        let r = uf.find(idx(class.members[0]));
        if !class.members.iter().all(|&v| uf.find(idx(v)) == r) {
            violations.push(match class.kind {
                ClassKind::Pair { corner, distance } => Violation::PairSplit {
                    corner: mag(corner),
                    distance,
                },
                _ => Violation::MidpointsSplit,
            });
        }
        if let Some(&cj) = owner.get(&r) {
            violations.push(Violation::ClassesMerged {
                first: mag(classes[cj].members[0]),
                second: mag(class.members[0]),
            });
        } else {
            owner.insert(r, ci);
        }
    }

    ValidationReport { violations }
}

/// Labels of a family as a set, for tests and comparisons.
pub fn label_set(g: &Grove, f: Family) -> BTreeSet<(u32, u32)> {
    g.labels(f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: Order, labels: &[EdgeLabel]) -> Grove {
        Grove::from_labels(n, labels.iter().copied()).unwrap()
    }

    #[test]
    fn order_one_and_two() {
        assert!(validate(&Grove::empty(1).unwrap()).is_ok());
        let two = g(2, &[EdgeLabel::a(0, 0), EdgeLabel::b(0, 0)]);
        assert!(validate(&two).is_ok(), "{:?}", validate(&two));
        let full = g(2, &[EdgeLabel::a(0, 0), EdgeLabel::b(0, 0), EdgeLabel::c(0, 0)]);
        let report = validate(&full);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::Cycle(_))));
        assert_eq!(edge_counts(&two), EdgeCounts { zero: 1, one: 2, two: 0, three: 0 });
    }

    #[test]
    fn triangle_config_examples() {
        let one = Grove::empty(1).unwrap();
        assert_eq!(triangle_config(&one, TriangleId::new(0, 0)).unwrap().count(), 0);
        let two = g(2, &[EdgeLabel::a(0, 0), EdgeLabel::b(0, 0)]);
        let cfg = triangle_config(&two, TriangleId::new(0, 0)).unwrap();
        assert_eq!(cfg.families(), vec![Family::A]);
        assert!(triangle_config(&two, TriangleId::new(2, 0)).is_err());
    }

    #[test]
    fn frozen_order_ideal() {
        let labels = [
            EdgeLabel::a(0, 0),
            EdgeLabel::a(1, 0),
            EdgeLabel::a(0, 1),
            EdgeLabel::a(1, 1),
            EdgeLabel::a(2, 0),
            EdgeLabel::a(0, 3),
        ];
        let fz = frozen_edges(&g(6, &labels));
        assert_eq!(fz.a, vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]);
        assert!(fz.b.is_empty());
        let lone = frozen_edges(&g(4, &[EdgeLabel::a(0, 0), EdgeLabel::a(2, 1)]));
        assert_eq!(lone.a, vec![(0, 0)]);
    }

    #[test]
    fn component_counts() {
        assert_eq!(components(&Grove::empty(1).unwrap()).count(), 3);
        assert_eq!(components(&g(2, &[EdgeLabel::a(0, 0)])).count(), 5);
    }

    #[test]
    fn json_roundtrip() {
        let two = g(2, &[EdgeLabel::a(0, 0), EdgeLabel::b(0, 0)]);
        let s = two.to_json();
        assert_eq!(s, r#"{"order":2,"a":[[0,0]],"b":[[0,0]],"c":[]}"#);
        assert_eq!(Grove::from_json(&s).unwrap(), two);
        assert!(Grove::from_json(r#"{"order":2,"a":[[2,0]],"b":[],"c":[]}"#).is_err());
    }
}
