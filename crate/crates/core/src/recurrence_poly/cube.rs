//! The cube recurrence on standard initial conditions, and the grove
//! oracle built from its Laurent polynomials.
//!
//! `f_{i,j,k} f_{i-1,j-1,k-1} = f_{i-1,j,k} f_{i,j-1,k-1}
//!     + f_{i,j-1,k} f_{i-1,j,k-1} + f_{i,j,k-1} f_{i-1,j-1,k}`
//! is evaluated at the points `i, j, k <= 0` with `i + j + k` running from
//! `-n + 2` up to `0`, starting from three layers of initial values.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::poly::{divide_products, LaurentMonomial, LaurentPolynomial, Product, Registry, Term};
use super::{guard, VariableId, VariableKind};
use crate::error::{Error, Result};
use crate::grove::Grove;
use crate::lattice::{check_order, label_index, labels_per_family, EdgeLabel, Order, TriangleId};

const TERM_CAP: usize = 1 << 26;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Initials {
    Vertex,
    Edges,
    EdgesAndFaces,
}

type Point = (i32, i32, i32);

/// Points with nonpositive coordinates summing to `s`.
fn layer(s: i32) -> Vec<Point> {
    let m = -s;
    let mut out = Vec::new();
    for a in 0..=m {
        for b in 0..=m - a {
            out.push((-a, -b, -(m - a - b)));
        }
    }
    out
}

fn edge_var(e: EdgeLabel) -> VariableId {
    VariableId::edge(e)
}

/// Face variable of triangle `t` at order `n`: the layer point just above
/// its bottom vertex.
pub fn face_variable(n: Order, t: TriangleId) -> VariableId {
    VariableId::face(
        -(t.p as i32),
        -(t.q as i32),
        -((n - t.p - t.q) as i32) + 1,
    )
}

fn run(n: Order, mode: Initials) -> Result<LaurentPolynomial> {
    check_order(n)?;
    let ni = n as i32;

    let mut vars = Vec::new();
    match mode {
        Initials::Vertex => {
            for s in [-ni - 1, -ni, -ni + 1] {
                vars.extend(layer(s).into_iter().map(|(i, j, k)| VariableId::vertex(i, j, k)));
            }
        }
        Initials::Edges | Initials::EdgesAndFaces => {
            if n >= 2 {
                for idx in 0..labels_per_family(n - 1) {
                    let (x, y) = crate::lattice::label_from_index(idx);
                    vars.push(edge_var(EdgeLabel::a(x, y)));
                    vars.push(edge_var(EdgeLabel::b(x, y)));
                    vars.push(edge_var(EdgeLabel::c(x, y)));
                }
            }
            if mode == Initials::EdgesAndFaces {
                vars.extend(
                    layer(-ni + 1)
                        .into_iter()
                        .map(|(i, j, k)| VariableId::face(i, j, k)),
                );
            }
        }
    }
    let reg = Registry::new(vars);
    let width = reg.width();

    let initial = |pt: Point| -> Vec<Term> {
        let (i, j, k) = pt;
        match mode {
            Initials::Vertex => reg.variable(VariableId::vertex(i, j, k)),
            Initials::Edges => reg.constant(),
            Initials::EdgesAndFaces => {
                if i + j + k == -ni + 1 {
                    reg.variable(VariableId::face(i, j, k))
                } else {
                    reg.constant()
                }
            }
        }
    };

    // Three most recent layers, oldest first.
    let mut layers: Vec<HashMap<Point, Vec<Term>>> = [-ni - 1, -ni, -ni + 1]
        .into_iter()
        .map(|s| layer(s).into_iter().map(|pt| (pt, initial(pt))).collect())
        .collect();

    for s in (-ni + 2)..=0 {
        let (l3, l2, l1) = (&layers[0], &layers[1], &layers[2]);
        let computed: Result<Vec<(Point, Vec<Term>)>> = layer(s)
            .into_par_iter()
            .map(|(i, j, k)| {
                let (mi, mj, mk) = ((-i) as u32, (-j) as u32, (-k) as u32);
                let weights = if mode == Initials::Vertex {
                    [vec![0i8; width], vec![0i8; width], vec![0i8; width]]
                } else {
                    let a = edge_var(EdgeLabel::a(mi, mj));
                    let b = edge_var(EdgeLabel::b(mk, mi));
                    let c = edge_var(EdgeLabel::c(mk, mj));
                    [
                        reg.unit(&[(a, 1), (b, 1)]),
                        reg.unit(&[(a, 1), (c, 1)]),
                        reg.unit(&[(b, 1), (c, 1)]),
                    ]
                };
                let pairs = [
                    (&l1[&(i - 1, j, k)], &l2[&(i, j - 1, k - 1)]),
                    (&l1[&(i, j - 1, k)], &l2[&(i - 1, j, k - 1)]),
                    (&l1[&(i, j, k - 1)], &l2[&(i - 1, j - 1, k)]),
                ];
                let products: Vec<Product<'_>> = pairs
                    .iter()
                    .zip(weights.iter())
                    .map(|((u, v), w)| Product {
                        weight: w,
                        left: u,
                        right: v,
                    })
                    .collect();
                let divisor = &l3[&(i - 1, j - 1, k - 1)];
                let q = divide_products(width, &products, divisor, TERM_CAP).map_err(|e| {
                    Error::InexactDivision(format!("at ({i}, {j}, {k}): {e}"))
                })?;
                Ok(((i, j, k), q))
            })
            .collect();
        let next: HashMap<Point, Vec<Term>> = computed?.into_iter().collect();
        layers.remove(0);
        layers.push(next);
    }

    let top = layers
        .pop()
        .and_then(|mut l| l.remove(&(0, 0, 0)))
        .ok_or_else(|| Error::Internal("missing apex value".into()))?;
    Ok(LaurentPolynomial::from_terms(&reg, top))
}

/// `f_{0,0,0}` with every initial value a formal variable `x_{i,j,k}`.
pub fn cube_poly_vertex(n: Order) -> Result<LaurentPolynomial> {
    guard("cube_poly_vertex", 5, n)?;
    run(n, Initials::Vertex)
}

/// `f_{0,0,0}` as a polynomial in long-edge variables, optionally with the
/// face variables of the triangles as formal weights.
pub fn cube_poly_edges(n: Order, with_faces: bool) -> Result<LaurentPolynomial> {
    if with_faces {
        guard("cube_poly_edges with faces", 6, n)?;
        run(n, Initials::EdgesAndFaces)
    } else {
        guard("cube_poly_edges", 7, n)?;
        run(n, Initials::Edges)
    }
}

/// The grove encoded by a term of [`cube_poly_edges`]. Face variables are
/// ignored.
pub fn decode_grove(term: &LaurentMonomial, n: Order) -> Result<Grove> {
    let mut g = Grove::empty(n)?;
    for (v, &e) in &term.exponents {
        match v.kind() {
            VariableKind::Face => continue,
            VariableKind::EdgeA | VariableKind::EdgeB | VariableKind::EdgeC => {
                if e != 1 {
                    return Err(Error::MalformedTerm(format!("{v} has exponent {e}")));
                }
                g.insert(v.edge_label().expect("edge variable"))?;
            }
            _ => return Err(Error::MalformedTerm(format!("unexpected variable {v}"))),
        }
    }
    Ok(g)
}

/// Every grove of order `n`, decoded from the edge polynomial.
pub fn oracle_groves(n: Order) -> Result<Vec<Grove>> {
    let poly = cube_poly_edges(n, false)?;
    poly.monomials().map(|m| decode_grove(&m, n)).collect()
}

/// Exact statistics over all groves of one order, per downward triangle.
///
/// Vectors are indexed by [`label_index`]`(p, q)` of the triangle.
#[derive(Clone, Debug)]
pub struct GroveStats {
    pub order: Order,
    pub groves: usize,
    /// Probability that the `A` slot is present.
    pub p: Vec<BigRational>,
    /// Probability that the `B` slot is present.
    pub q: Vec<BigRational>,
    /// Probability that the `C` slot is present.
    pub r: Vec<BigRational>,
    /// Mean of `1 - #present slots`.
    pub e: Vec<BigRational>,
    /// Mean face-variable exponent read off the edge-and-face polynomial.
    pub e_face: Vec<BigRational>,
    /// Counts of each slot configuration, as a bitmask `A=1, B=2, C=4`.
    pub configs: Vec<[u64; 8]>,
}

impl GroveStats {
    pub fn at(&self, t: TriangleId) -> usize {
        label_index(t.p, t.q)
    }

    /// Probability of a slot configuration at triangle `t`.
    pub fn config_probability(&self, t: TriangleId, mask: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.configs[self.at(t)][mask]),
            BigInt::from(self.groves),
        )
    }
}

pub fn oracle_grove_stats(n: Order) -> Result<GroveStats> {
    let poly = cube_poly_edges(n, true)?;
    let tri = labels_per_family(n);
    let mut configs = vec![[0u64; 8]; tri];
    let mut face_sum = vec![0i64; tri];
    for m in poly.monomials() {
        if m.coefficient != BigInt::from(1) {
            return Err(Error::Internal("grove term with coefficient other than 1".into()));
        }
        let g = decode_grove(&m, n)?;
        for idx in 0..tri {
            let (p, q) = crate::lattice::label_from_index(idx);
            let t = TriangleId::new(p, q);
            let r = t.r(n);
            let mask = g.contains(EdgeLabel::a(p, q)) as usize
                | (g.contains(EdgeLabel::b(r, p)) as usize) << 1
                | (g.contains(EdgeLabel::c(r, q)) as usize) << 2;
            configs[idx][mask] += 1;
            face_sum[idx] += m.exponent(face_variable(n, t)) as i64;
        }
    }
    let total = poly.len();
    let ratio = |x: i64| BigRational::new(BigInt::from(x), BigInt::from(total));
    let mut out = GroveStats {
        order: n,
        groves: total,
        p: Vec::with_capacity(tri),
        q: Vec::with_capacity(tri),
        r: Vec::with_capacity(tri),
        e: Vec::with_capacity(tri),
        e_face: Vec::with_capacity(tri),
        configs,
    };
    for idx in 0..tri {
        let c = &out.configs[idx];
        let with = |bit: usize| -> i64 {
            (0..8).filter(|m| m & bit != 0).map(|m| c[m] as i64).sum()
        };
        let mut e = BigRational::zero();
        for (mask, &count) in c.iter().enumerate() {
            let present = (mask as u32).count_ones() as i64;
            e += ratio((1 - present) * count as i64);
        }
        out.p.push(ratio(with(1)));
        out.q.push(ratio(with(2)));
        out.r.push(ratio(with(4)));
        out.e.push(e);
        out.e_face.push(ratio(face_sum[idx]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grove::validate;

    #[test]
    fn order_two_vertex_polynomial() {
        let x = VariableId::vertex;
        let d = x(-1, -1, -1);
        let expected = LaurentPolynomial::from_monomials([
            LaurentMonomial::new(1.into(), [(x(-1, -1, 0), 1), (x(0, 0, -1), 1), (d, -1)]),
            LaurentMonomial::new(1.into(), [(x(-1, 0, -1), 1), (x(0, -1, 0), 1), (d, -1)]),
            LaurentMonomial::new(1.into(), [(x(0, -1, -1), 1), (x(-1, 0, 0), 1), (d, -1)]),
        ])
        .unwrap();
        assert_eq!(cube_poly_vertex(2).unwrap(), expected);
        assert_eq!(cube_poly_vertex(1).unwrap().len(), 1);
    }

    #[test]
    fn small_edge_polynomials() {
        for n in 1..=4u32 {
            let poly = cube_poly_edges(n, false).unwrap();
            assert_eq!(poly.len(), 3usize.pow(n * n / 4));
            for m in poly.monomials() {
                let g = decode_grove(&m, n).unwrap();
                assert!(validate(&g).is_ok(), "{g:?}");
            }
        }
    }

    #[test]
    fn decode_rejects_bad_exponents() {
        let m = LaurentMonomial::new(1.into(), [(VariableId::edge(EdgeLabel::a(0, 0)), 2)]);
        assert!(decode_grove(&m, 3).is_err());
    }

    #[test]
    fn stats_small() {
        let s = oracle_grove_stats(1).unwrap();
        assert_eq!(s.e[0], BigRational::from_integer(1.into()));
        let s2 = oracle_grove_stats(2).unwrap();
        assert_eq!(s2.p[0], BigRational::new(2.into(), 3.into()));
        let s3 = oracle_grove_stats(3).unwrap();
        assert_eq!(s3.p[0], BigRational::new(8.into(), 9.into()));
        assert_eq!(s3.e, s3.e_face);
    }
}
