//! Aztec diamonds: tilings, compass classes and domino shuffling.
//!
//! Cells are unit squares with half-integer centers `(x, y)`,
//! `|x| + |y| <= n`, `y` pointing up. They are stored doubled, as the odd
//! integers `(2x, 2y)`. A domino is anchored at its left cell (horizontal)
//! or its top cell (vertical).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arctic::{MisfitReport, SectorTally};
use crate::error::{Error, Result};
use crate::lattice::Order;
use crate::shuffle::RandomSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "h")]
    Horizontal,
    #[serde(rename = "v")]
    Vertical,
}

/// A domino, anchored at doubled cell coordinates `(x2, y2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domino {
    pub x2: i32,
    pub y2: i32,
    pub orient: Orientation,
}

impl Domino {
    pub const fn new(x2: i32, y2: i32, orient: Orientation) -> Self {
        Self { x2, y2, orient }
    }

    /// The two cells, anchor first.
    pub fn cells(&self) -> [(i32, i32); 2] {
        match self.orient {
            Orientation::Horizontal => [(self.x2, self.y2), (self.x2 + 2, self.y2)],
            Orientation::Vertical => [(self.x2, self.y2), (self.x2, self.y2 - 2)],
        }
    }

    /// Doubled coordinates of the domino's center.
    pub fn center2(&self) -> (i32, i32) {
        match self.orient {
            Orientation::Horizontal => (self.x2 + 1, self.y2),
            Orientation::Vertical => (self.x2, self.y2 - 1),
        }
    }
}

/// Direction a domino moves under shuffling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DominoClass {
    North,
    South,
    East,
    West,
}

impl fmt::Display for DominoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DominoClass::North => "N",
            DominoClass::South => "S",
            DominoClass::East => "E",
            DominoClass::West => "W",
        };
        f.write_str(s)
    }
}

/// A domino tiling of the order-`n` Aztec diamond.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AztecTiling {
    order: Order,
    dominoes: Vec<Domino>,
}

/// Occupancy grid over the bounding square of a diamond.
struct Grid {
    n: i32,
    cells: Vec<u32>,
}

const EMPTY: u32 = u32::MAX;

impl Grid {
    fn new(n: Order) -> Self {
        let side = 2 * n as usize;
        Self {
            n: n as i32,
            cells: vec![EMPTY; side * side],
        }
    }

    fn inside(&self, (x, y): (i32, i32)) -> bool {
        x.abs() + y.abs() <= 2 * self.n && x % 2 != 0 && y % 2 != 0
    }

    fn slot(&self, (x, y): (i32, i32)) -> usize {
        let side = 2 * self.n;
        let col = (x + side - 1) / 2;
        let row = (side - 1 - y) / 2;
        (row * side + col) as usize
    }

    fn get(&self, c: (i32, i32)) -> u32 {
        self.cells[self.slot(c)]
    }

    fn set(&mut self, c: (i32, i32), v: u32) {
        let s = self.slot(c);
        self.cells[s] = v;
    }

    /// Diamond cells row by row from the top, left to right.
    fn scan(n: i32) -> impl Iterator<Item = (i32, i32)> {
        (0..2 * n).flat_map(move |row| {
            let y = 2 * n - 1 - 2 * row;
            let count = 2 * n - y.abs() + 1;
            (0..count).map(move |c| (-count + 1 + 2 * c, y))
        })
    }
}

pub(crate) fn diamond_cells(n: Order) -> impl Iterator<Item = (i32, i32)> {
    Grid::scan(n as i32)
}

impl AztecTiling {
    /// Checks that the dominoes cover the diamond exactly once.
    pub fn new(order: Order, mut dominoes: Vec<Domino>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(0, 1));
        }
        let mut grid = Grid::new(order);
        for (idx, d) in dominoes.iter().enumerate() {
            for c in d.cells() {
                if !grid.inside(c) {
                    return Err(Error::InvalidTiling(format!(
                        "cell ({}, {}) is outside the diamond",
                        c.0, c.1
                    )));
                }
                if grid.get(c) != EMPTY {
                    return Err(Error::InvalidTiling(format!(
                        "cell ({}, {}) is covered twice",
                        c.0, c.1
                    )));
                }
                grid.set(c, idx as u32);
            }
        }
        let cells = 2 * order as usize * (order as usize + 1);
        if dominoes.len() * 2 != cells {
            return Err(Error::InvalidTiling(format!(
                "{} dominoes cannot cover {cells} cells",
                dominoes.len()
            )));
        }
        dominoes.sort_unstable();
        Ok(Self { order, dominoes })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn dominoes(&self) -> &[Domino] {
        &self.dominoes
    }

    pub fn contains(&self, d: &Domino) -> bool {
        self.dominoes.binary_search(d).is_ok()
    }

    pub fn to_json_value(&self) -> TilingJson {
        TilingJson {
            order: self.order,
            dominoes: self
                .dominoes
                .iter()
                .map(|d| DominoJson {
                    i: d.x2,
                    j: d.y2,
                    orient: d.orient,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("tiling serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: TilingJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidTiling(e.to_string()))?;
        Self::new(
            raw.order,
            raw.dominoes
                .into_iter()
                .map(|d| Domino::new(d.i, d.j, d.orient))
                .collect(),
        )
    }
}

/// Interchange form; `i`, `j` are the doubled anchor coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingJson {
    pub order: Order,
    pub dominoes: Vec<DominoJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominoJson {
    pub i: i32,
    pub j: i32,
    pub orient: Orientation,
}

/// White cells are those with `x + y = n + 1 (mod 2)`; this makes the
/// leftmost cell of each row in the top half white.
fn is_white(n: Order, (x2, y2): (i32, i32)) -> bool {
    ((x2 + y2) / 2 - (n as i32 + 1)).rem_euclid(2) == 0
}

fn class_of(n: Order, d: &Domino) -> DominoClass {
    let white = is_white(n, (d.x2, d.y2));
    match (d.orient, white) {
        (Orientation::Horizontal, true) => DominoClass::North,
        (Orientation::Horizontal, false) => DominoClass::South,
        (Orientation::Vertical, false) => DominoClass::East,
        (Orientation::Vertical, true) => DominoClass::West,
    }
}

pub fn classify(t: &AztecTiling, d: &Domino) -> Result<DominoClass> {
    if !t.contains(d) {
        return Err(Error::InvalidTiling("domino is not part of the tiling".into()));
    }
    Ok(class_of(t.order, d))
}

/// Slides dominoes of an order-`n` tiling (possibly `n = 0`, no dominoes)
/// and fills the holes of the order-`n + 1` diamond.
fn shuffle_dominoes(n: Order, dominoes: &[Domino], rng: &mut RandomSource) -> Result<Vec<Domino>> {
    let classes: Vec<DominoClass> = dominoes.iter().map(|d| class_of(n, d)).collect();
    let mut dead = vec![false; dominoes.len()];
    if n > 0 {
        let mut anchors = Grid::new(n);
        for (idx, d) in dominoes.iter().enumerate() {
            anchors.set((d.x2, d.y2), idx as u32);
        }
        let find = |c: (i32, i32), orient: Orientation, class: DominoClass| -> Option<usize> {
            if !anchors.inside(c) {
                return None;
            }
            let k = anchors.get(c);
            if k == EMPTY {
                return None;
            }
            let k = k as usize;
            (dominoes[k].orient == orient && classes[k] == class).then_some(k)
        };
        for (idx, d) in dominoes.iter().enumerate() {
            let partner = match classes[idx] {
                DominoClass::South => find((d.x2, d.y2 - 2), d.orient, DominoClass::North),
                DominoClass::East => find((d.x2 + 2, d.y2), d.orient, DominoClass::West),
                _ => None,
            };
            if let Some(k) = partner {
                dead[idx] = true;
                dead[k] = true;
            }
        }
    }

    let m = n + 1;
    let mut grid = Grid::new(m);
    let mut out = Vec::with_capacity(m as usize * (m as usize + 1));
    for (idx, d) in dominoes.iter().enumerate() {
        if dead[idx] {
            continue;
        }
        let (dx, dy) = match classes[idx] {
            DominoClass::North => (0, 2),
            DominoClass::South => (0, -2),
            DominoClass::East => (2, 0),
            DominoClass::West => (-2, 0),
        };
        let moved = Domino::new(d.x2 + dx, d.y2 + dy, d.orient);
        for c in moved.cells() {
            if !grid.inside(c) || grid.get(c) != EMPTY {
                return Err(Error::Internal(format!(
                    "sliding domino collides at ({}, {})",
                    c.0, c.1
                )));
            }
            grid.set(c, out.len() as u32);
        }
        out.push(moved);
    }

    for (x, y) in Grid::scan(m as i32) {
        if grid.get((x, y)) != EMPTY {
            continue;
        }
        let block = [(x, y), (x + 2, y), (x, y - 2), (x + 2, y - 2)];
        if block.iter().any(|&c| !grid.inside(c) || grid.get(c) != EMPTY) {
            return Err(Error::Internal(format!("hole at ({x}, {y}) is not a 2x2 block")));
        }
        let pair = if rng.coin() {
            [
                Domino::new(x, y, Orientation::Horizontal),
                Domino::new(x, y - 2, Orientation::Horizontal),
            ]
        } else {
            [
                Domino::new(x, y, Orientation::Vertical),
                Domino::new(x + 2, y, Orientation::Vertical),
            ]
        };
        for d in pair {
            for c in d.cells() {
                grid.set(c, out.len() as u32);
            }
            out.push(d);
        }
    }
    Ok(out)
}

/// One shuffle step: order `n` to order `n + 1`.
pub fn domino_shuffle_once(t: &AztecTiling, rng: &mut RandomSource) -> Result<AztecTiling> {
    let checked = AztecTiling::new(t.order, t.dominoes.clone())?;
    let next = shuffle_dominoes(checked.order, &checked.dominoes, rng)?;
    AztecTiling::new(t.order + 1, next)
}

/// Random tiling of order `n` using the stream of `rng`.
pub fn generate_tiling_with(n: Order, rng: &mut RandomSource) -> Result<AztecTiling> {
    if n == 0 {
        return Err(Error::InvalidOrder(0, 1));
    }
    let mut dominoes = Vec::new();
    for k in 0..n {
        dominoes = shuffle_dominoes(k, &dominoes, rng)?;
    }
    dominoes.sort_unstable();
    Ok(AztecTiling { order: n, dominoes })
}

/// Uniformly random tiling of order `n`, grown by shuffling from the empty
/// diamond.
pub fn generate_tiling(n: Order, seed: u64) -> Result<AztecTiling> {
    generate_tiling_with(n, &mut RandomSource::new(seed))
}

/// Positions `(i, j)` such that a north-going domino is centered at
/// `(i, j + 1/2)`.
pub fn north_positions(t: &AztecTiling) -> impl Iterator<Item = (i32, i32)> + '_ {
    t.dominoes
        .iter()
        .filter(|d| class_of(t.order, d) == DominoClass::North)
        .map(|d| {
            let (cx, cy) = d.center2();
            (cx / 2, (cy - 1) / 2)
        })
}

/// Counts dominoes outside the dilated inscribed circle whose class differs
/// from the class of their polar region.
pub fn tiling_misfit_stats(t: &AztecTiling, epsilon: f64) -> Result<MisfitReport> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let scale = 2.0 * (t.order as f64 + 1.0);
    let radius2 = (1.0 + epsilon).powi(2) / 2.0;
    let mut tallies = [
        SectorTally::new("north"),
        SectorTally::new("south"),
        SectorTally::new("east"),
        SectorTally::new("west"),
    ];
    for d in &t.dominoes {
        let (cx, cy) = d.center2();
        let (x, y) = (cx as f64 / scale, cy as f64 / scale);
        if x * x + y * y <= radius2 {
            continue;
        }
        let (slot, expected) = if y.abs() >= x.abs() {
            if y > 0.0 {
                (0, DominoClass::North)
            } else {
                (1, DominoClass::South)
            }
        } else if x > 0.0 {
            (2, DominoClass::East)
        } else {
            (3, DominoClass::West)
        };
        tallies[slot].outside += 1;
        if class_of(t.order, d) != expected {
            tallies[slot].mismatched += 1;
        }
    }
    Ok(MisfitReport::from_tallies(t.order, epsilon, tallies.to_vec()))
}
