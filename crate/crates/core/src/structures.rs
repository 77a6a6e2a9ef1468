//! Young diagrams of frozen corners, and the nexus of a grove.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dsu::UnionFind;
use crate::error::{Error, Result};
use crate::grove::{frozen_family, Grove};
use crate::lattice::{label_index, Family, Order, VertexCoord};
use crate::shuffle::{shuffle_in_place, Bias, RandomSource};

/// Weakly decreasing row lengths; trailing zero rows are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct YoungDiagram {
    pub rows: Vec<u32>,
}

impl YoungDiagram {
    pub fn new(mut rows: Vec<u32>) -> Result<Self> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Internal(format!("rows {rows:?} are not weakly decreasing")));
        }
        Ok(Self { rows })
    }

    pub fn contains(&self, i: u32, j: u32) -> bool {
        self.rows.get(i as usize).is_some_and(|&len| j < len)
    }

    pub fn size(&self) -> u32 {
        self.rows.iter().sum()
    }

    pub fn boxes(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (0..len).map(move |j| (i as u32, j)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagram serializes")
    }
}

/// Frozen boxes of one family: box `(p, q)` is label `(p, q)` of that
/// family, and row `p` collects the boxes with first index `p`.
pub fn young_projection(g: &Grove, family: Family) -> YoungDiagram {
    let mut rows: Vec<u32> = Vec::new();
    for (p, q) in frozen_family(g, family) {
        let p = p as usize;
        if rows.len() <= p {
            rows.resize(p + 1, 0);
        }
        rows[p] = rows[p].max(q + 1);
    }
    YoungDiagram::new(rows).expect("frozen labels form an order ideal")
}

/// Boxes that can be added: the outer corners of the diagram.
pub fn growth_positions(d: &YoungDiagram) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    let len = d.rows.len();
    for i in 0..=len {
        let here = d.rows.get(i).copied().unwrap_or(0);
        if i == 0 || d.rows[i - 1] > here {
            out.insert((i as u32, here));
        }
    }
    out
}

/// Growth positions by checking the definition on every candidate box.
pub fn growth_positions_by_scan(d: &YoungDiagram) -> BTreeSet<(u32, u32)> {
    let frozen = |i: i64, j: i64| i < 0 || j < 0 || d.contains(i as u32, j as u32);
    let width = d.rows.first().copied().unwrap_or(0) as i64;
    let height = d.rows.len() as i64;
    let mut out = BTreeSet::new();
    for i in 0..=height {
        for j in 0..=width {
            if !frozen(i, j) && frozen(i - 1, j) && frozen(i, j - 1) {
                out.insert((i as u32, j as u32));
            }
        }
    }
    out
}

/// Layer of a vertex of the three-layer grove.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Level {
    /// Coordinate sum `-n + 1`.
    Up,
    /// Coordinate sum `-n`, the lattice the grove is drawn on.
    Flat,
    /// Coordinate sum `-n - 1`.
    Down,
}

/// The three-layer forest of a grove: long edges between flat vertices,
/// and for each downward triangle a short edge from its up vertex through
/// every absent slot to the down vertex beyond it.
struct Forest3 {
    n: u32,
    offsets: [usize; 3],
    adjacency: Vec<Vec<u32>>,
    acyclic: bool,
}

impl Forest3 {
    fn layer_of(level: Level) -> usize {
        match level {
            Level::Up => 0,
            Level::Flat => 1,
            Level::Down => 2,
        }
    }

    fn id(&self, level: Level, a: u32, b: u32) -> usize {
        self.offsets[Self::layer_of(level)] + label_index(a, b)
    }

    fn build(g: &Grove) -> Self {
        let n = g.order();
        let size = |s: u32| (s as usize + 1) * (s as usize + 2) / 2;
        let offsets = [0, size(n - 1), size(n - 1) + size(n)];
        let total = offsets[2] + size(n + 1);
        let mut f = Self {
            n,
            offsets,
            adjacency: vec![Vec::new(); total],
            acyclic: true,
        };
        let mut uf = UnionFind::new(total);
        let mut link = |f: &mut Self, u: usize, v: usize| {
            f.adjacency[u].push(v as u32);
            f.adjacency[v].push(u as u32);
            if !uf.union(u, v) {
                f.acyclic = false;
            }
        };
        for e in g.edges() {
            let [(a0, b0, _), (a1, b1, _)] = crate::lattice::endpoint_magnitudes(n, &e);
            let (u, v) = (f.id(Level::Flat, a0, b0), f.id(Level::Flat, a1, b1));
            link(&mut f, u, v);
        }
        for p in 0..n {
            for q in 0..n - p {
                let r = n - 1 - p - q;
                let up = f.id(Level::Up, p, q);
                let absent = [
                    (!g.has(Family::A, p, q), (p + 1, q + 1)),
                    (!g.has(Family::B, r, p), (p + 1, q)),
                    (!g.has(Family::C, r, q), (p, q + 1)),
                ];
                for (missing, (a, b)) in absent {
                    if missing {
                        let down = f.id(Level::Down, a, b);
                        link(&mut f, up, down);
                    }
                }
            }
        }
        f
    }

    fn vertex(&self, id: usize) -> (VertexCoord, Level) {
        let (level, base, sum) = if id >= self.offsets[2] {
            (Level::Down, self.offsets[2], self.n + 1)
        } else if id >= self.offsets[1] {
            (Level::Flat, self.offsets[1], self.n)
        } else {
            (Level::Up, 0, self.n - 1)
        };
        let (a, b) = crate::lattice::label_from_index(id - base);
        (VertexCoord::from_magnitudes(a, b, sum - a - b), level)
    }

    /// BFS parents from `root`; `usize::MAX` marks unreached vertices.
    fn parents(&self, root: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.adjacency.len()];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                let v = v as usize;
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        parent
    }
}

/// The nexus of a grove and the layer it lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Nexus {
    pub order: Order,
    pub vertex: VertexCoord,
    pub level: Level,
}

/// Side midpoints `(m, m, 0)`, `(m, 0, m)`, `(0, m, m)` in magnitudes:
/// flat vertices at even order, up vertices at odd order.
fn midpoint_ids(f: &Forest3) -> [usize; 3] {
    let n = f.n;
    let m = n / 2;
    let level = if n % 2 == 0 { Level::Flat } else { Level::Up };
    [f.id(level, m, m), f.id(level, m, 0), f.id(level, 0, m)]
}

/// The median of the three side midpoints in the tree that contains them.
///
/// The tree lives in the three-layer picture of the grove, where the
/// midpoints are vertices at every order. Returns `None` if the midpoints
/// are not connected or the three-layer graph has a cycle.
pub fn find_nexus(g: &Grove) -> Option<Nexus> {
    if g.order() < 2 {
        return None;
    }
    let f = Forest3::build(g);
    if !f.acyclic {
        return None;
    }
    let [m1, m2, m3] = midpoint_ids(&f);
    let parent = f.parents(m1);
    if parent[m2] == usize::MAX || parent[m3] == usize::MAX {
        return None;
    }
    let path = |mut v: usize| {
        let mut out = vec![v];
        while parent[v] != v {
            v = parent[v];
            out.push(v);
        }
        out.reverse();
        out
    };
    let (p2, p3) = (path(m2), path(m3));
    let shared = p2.iter().zip(&p3).take_while(|(a, b)| a == b).count();
    let median = p2[shared - 1];
    let (vertex, level) = f.vertex(median);
    Some(Nexus {
        order: g.order(),
        vertex,
        level,
    })
}

/// Whether the three-layer graph of `g` is a forest.
pub fn three_layer_is_forest(g: &Grove) -> bool {
    Forest3::build(g).acyclic
}

/// Lattice distance on the vertices of `Z^3`: the number of steps along
/// `+-e_i` or `+-(e_i - e_j)`, `+-(e_i + e_j)` moves.
pub fn lattice_norm(a: VertexCoord, b: VertexCoord) -> u32 {
    let d = [(a.i - b.i).unsigned_abs(), (a.j - b.j).unsigned_abs(), (a.k - b.k).unsigned_abs()];
    let max = *d.iter().max().unwrap();
    let half = (d.iter().sum::<u32>() + 1) / 2;
    max.max(half)
}

/// Nexus positions after each shuffle of one run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NexusTrace {
    pub entries: Vec<Nexus>,
}

/// Per-level counts of nexus moves between consecutive orders.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceStats {
    /// Keyed by the level before the step: `(stays, moves)`.
    pub by_level: BTreeMap<String, (usize, usize)>,
    pub max_norm: u32,
}

impl NexusTrace {
    pub fn displacements(&self) -> Vec<u32> {
        self.entries
            .windows(2)
            .map(|w| lattice_norm(w[0].vertex, w[1].vertex))
            .collect()
    }

    pub fn stats(&self) -> TraceStats {
        let mut out = TraceStats::default();
        for w in self.entries.windows(2) {
            let norm = lattice_norm(w[0].vertex, w[1].vertex);
            out.max_norm = out.max_norm.max(norm);
            let slot = out.by_level.entry(format!("{:?}", w[0].level)).or_default();
            if norm == 0 {
                slot.0 += 1;
            } else {
                slot.1 += 1;
            }
        }
        out
    }

    /// CSV with header `step,order,i,j,k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,order,i,j,k\n");
        for (step, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "{step},{},{},{},{}\n",
                e.order, e.vertex.i, e.vertex.j, e.vertex.k
            ));
        }
        out
    }
}

/// Shuffles from order 1 up to `n_final`, recording the nexus after every
/// shuffle (orders `2..=n_final`).
pub fn nexus_trace_with(n_final: Order, bias: &Bias, rng: &mut RandomSource) -> Result<NexusTrace> {
    if n_final < 2 {
        return Err(Error::InvalidOrder(n_final, 2));
    }
    let mut g = Grove::empty(1)?;
    let mut trace = NexusTrace::default();
    for _ in 2..=n_final {
        shuffle_in_place(&mut g, bias, rng);
        let nexus = find_nexus(&g)
            .ok_or_else(|| Error::Internal(format!("no nexus at order {}", g.order())))?;
        trace.entries.push(nexus);
    }
    Ok(trace)
}

pub fn nexus_trace(n_final: Order, bias: &Bias, seed: u64) -> Result<NexusTrace> {
    nexus_trace_with(n_final, bias, &mut RandomSource::new(seed))
}
