//! The octahedron recurrence with flat initial values, and an independent
//! backtracking enumeration of Aztec diamond tilings.
//!
//! `g_{i,j,m} g_{i,j,m-2} = g_{i-1,j,m-1} g_{i+1,j,m-1} + g_{i,j-1,m-1} g_{i,j+1,m-1}`
//! with `g_{i,j,0} = x_{i,j,0}` and `g_{i,j,-1} = x_{i,j,-1}`.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::poly::{divide_products, LaurentMonomial, LaurentPolynomial, Product, Registry, Term};
use super::{guard, VariableId};
use crate::aztec::{diamond_cells, AztecTiling, Domino, Orientation};
use crate::error::{Error, Result};
use crate::lattice::{check_order, Order};

type Point = (i32, i32);

/// Points `(i, j)` with `|i| + |j| <= radius` and `i + j = parity (mod 2)`.
fn points(radius: i32, parity: i32) -> Vec<Point> {
    let mut out = Vec::new();
    if radius < 0 {
        return out;
    }
    for i in -radius..=radius {
        let span = radius - i.abs();
        for j in -span..=span {
            if (i + j - parity).rem_euclid(2) == 0 {
                out.push((i, j));
            }
        }
    }
    out
}

/// `g_{0,0,n}`, whose terms are the monomials of the order-`n` tilings.
pub fn octahedron_poly(n: Order) -> Result<LaurentPolynomial> {
    guard("octahedron_poly", 4, n)?;
    check_order(n)?;
    let ni = n as i32;
    let top = points(ni, ni);
    let bottom = points(ni - 1, ni + 1);
    let mut vars: Vec<VariableId> = top.iter().map(|&(i, j)| VariableId::aztec(i, j, 0)).collect();
    vars.extend(bottom.iter().map(|&(i, j)| VariableId::aztec(i, j, -1)));
    let reg = Registry::new(vars);
    let width = reg.width();
    let zero = vec![0i8; width];

    let mut older: HashMap<Point, Vec<Term>> = bottom
        .iter()
        .map(|&(i, j)| ((i, j), reg.variable(VariableId::aztec(i, j, -1))))
        .collect();
    let mut newer: HashMap<Point, Vec<Term>> = top
        .iter()
        .map(|&(i, j)| ((i, j), reg.variable(VariableId::aztec(i, j, 0))))
        .collect();

    for m in 1..=ni {
        let mut next = HashMap::new();
        for (i, j) in points(ni - m, ni - m) {
            let products = [
                Product {
                    weight: &zero,
                    left: &newer[&(i - 1, j)],
                    right: &newer[&(i + 1, j)],
                },
                Product {
                    weight: &zero,
                    left: &newer[&(i, j - 1)],
                    right: &newer[&(i, j + 1)],
                },
            ];
            let q = divide_products(width, &products, &older[&(i, j)], 1 << 24)
                .map_err(|e| Error::InexactDivision(format!("at ({i}, {j}, {m}): {e}")))?;
            next.insert((i, j), q);
        }
        older = std::mem::replace(&mut newer, next);
    }
    let apex = newer
        .remove(&(0, 0))
        .ok_or_else(|| Error::Internal("missing apex value".into()))?;
    Ok(LaurentPolynomial::from_terms(&reg, apex))
}

/// All tilings of the order-`n` diamond, by backtracking: the first
/// uncovered cell in reading order is paired with its right or lower
/// neighbor.
pub fn enumerate_tilings(n: Order) -> Result<Vec<AztecTiling>> {
    guard("enumerate_tilings", 4, n)?;
    check_order(n)?;
    let cells: Vec<(i32, i32)> = diamond_cells(n).collect();
    let index: HashMap<(i32, i32), usize> = cells.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let mut covered = vec![false; cells.len()];
    let mut stack = Vec::new();
    let mut out = Vec::new();

    fn walk(
        n: Order,
        start: usize,
        cells: &[(i32, i32)],
        index: &HashMap<(i32, i32), usize>,
        covered: &mut [bool],
        stack: &mut Vec<Domino>,
        out: &mut Vec<AztecTiling>,
    ) -> Result<()> {
        let Some(first) = (start..cells.len()).find(|&k| !covered[k]) else {
            out.push(AztecTiling::new(n, stack.clone())?);
            return Ok(());
        };
        let (x, y) = cells[first];
        for (orient, other) in [
            (Orientation::Horizontal, (x + 2, y)),
            (Orientation::Vertical, (x, y - 2)),
        ] {
            if let Some(&k) = index.get(&other) {
                if !covered[k] {
                    covered[first] = true;
                    covered[k] = true;
                    stack.push(Domino::new(x, y, orient));
                    walk(n, first + 1, cells, index, covered, stack, out)?;
                    stack.pop();
                    covered[first] = false;
                    covered[k] = false;
                }
            }
        }
        Ok(())
    }

    walk(n, 0, &cells, &index, &mut covered, &mut stack, &mut out)?;
    Ok(out)
}

/// Number of dominoes among the four cell pairs around the lattice point
/// `(i, j)`.
pub fn face_degree(t: &AztecTiling, i: i32, j: i32) -> u32 {
    let (x, y) = (2 * i, 2 * j);
    let around = [
        Domino::new(x - 1, y + 1, Orientation::Horizontal),
        Domino::new(x - 1, y - 1, Orientation::Horizontal),
        Domino::new(x - 1, y + 1, Orientation::Vertical),
        Domino::new(x + 1, y + 1, Orientation::Vertical),
    ];
    around.iter().filter(|d| t.contains(d)).count() as u32
}

/// The monomial `prod x_{i,j,delta}^{1 - deg(i,j)}` of a tiling, with
/// `delta = 0` when `i + j + n` is even and `-1` otherwise.
pub fn tiling_monomial(t: &AztecTiling) -> LaurentMonomial {
    let n = t.order() as i32;
    let mut exps = Vec::new();
    for (i, j) in points(n, 0).into_iter().chain(points(n, 1)) {
        let e = 1 - face_degree(t, i, j) as i32;
        let delta = if (i + j + n) % 2 == 0 { 0 } else { -1 };
        exps.push((VariableId::aztec(i, j, delta), e));
    }
    LaurentMonomial::new(BigInt::from(1), exps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_agree() {
        for n in 1..=3 {
            let tilings = enumerate_tilings(n).unwrap();
            assert_eq!(tilings.len(), 1 << (n * (n + 1) / 2));
            let poly = octahedron_poly(n).unwrap();
            assert_eq!(poly.len(), tilings.len());
            for t in &tilings {
                assert!(poly.contains(&tiling_monomial(t)));
            }
        }
    }

    #[test]
    fn order_one_center_face() {
        for t in enumerate_tilings(1).unwrap() {
            assert_eq!(face_degree(&t, 0, 0), 2);
        }
    }
}
