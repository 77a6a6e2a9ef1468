//! Exact Laurent polynomials over a fixed variable registry, with the
//! streaming division used by the recurrences.

use std::cmp::Ordering;
use std::collections::binary_heap::PeekMut;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{EdgeLabel, Family};

const FIELD_BITS: u32 = 20;
const FIELD_MASK: u64 = (1 << FIELD_BITS) - 1;
const FIELD_OFFSET: i64 = 1 << (FIELD_BITS - 1);

/// What a variable stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariableKind {
    /// `x_{i,j,k}` at a vertex of the initial conditions.
    Vertex,
    /// Long-edge variables `a`, `b`, `c`.
    EdgeA,
    EdgeB,
    EdgeC,
    /// Face variable of a downward triangle, `x_{i,j,k}`.
    Face,
    /// Octahedron initial `x_{i,j,delta}` with `delta` in `{0, -1}`.
    Aztec,
}

impl VariableKind {
    fn code(self) -> u64 {
        match self {
            VariableKind::Vertex => 0,
            VariableKind::EdgeA => 1,
            VariableKind::EdgeB => 2,
            VariableKind::EdgeC => 3,
            VariableKind::Face => 4,
            VariableKind::Aztec => 5,
        }
    }

    fn from_code(c: u64) -> Self {
        match c {
            0 => VariableKind::Vertex,
            1 => VariableKind::EdgeA,
            2 => VariableKind::EdgeB,
            3 => VariableKind::EdgeC,
            4 => VariableKind::Face,
            _ => VariableKind::Aztec,
        }
    }
}

/// A variable packed into one integer: kind plus three signed indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableId(u64);

impl VariableId {
    fn pack(kind: VariableKind, a: i32, b: i32, c: i32) -> Self {
        let f = |v: i32| {
            let v = v as i64 + FIELD_OFFSET;
            assert!((0..(1 << FIELD_BITS)).contains(&v), "variable index out of range");
            v as u64
        };
        Self(kind.code() << 60 | f(a) << (2 * FIELD_BITS) | f(b) << FIELD_BITS | f(c))
    }

    pub fn vertex(i: i32, j: i32, k: i32) -> Self {
        Self::pack(VariableKind::Vertex, i, j, k)
    }

    pub fn face(i: i32, j: i32, k: i32) -> Self {
        Self::pack(VariableKind::Face, i, j, k)
    }

    pub fn aztec(i: i32, j: i32, delta: i32) -> Self {
        Self::pack(VariableKind::Aztec, i, j, delta)
    }

    pub fn edge(e: EdgeLabel) -> Self {
        let kind = match e.family {
            Family::A => VariableKind::EdgeA,
            Family::B => VariableKind::EdgeB,
            Family::C => VariableKind::EdgeC,
        };
        Self::pack(kind, e.first as i32, e.second as i32, 0)
    }

    pub fn kind(&self) -> VariableKind {
        VariableKind::from_code(self.0 >> 60)
    }

    pub fn indices(&self) -> (i32, i32, i32) {
        let f = |shift: u32| (((self.0 >> shift) & FIELD_MASK) as i64 - FIELD_OFFSET) as i32;
        (f(2 * FIELD_BITS), f(FIELD_BITS), f(0))
    }

    /// The edge label of an edge variable.
    pub fn edge_label(&self) -> Option<EdgeLabel> {
        let (a, b, _) = self.indices();
        let family = match self.kind() {
            VariableKind::EdgeA => Family::A,
            VariableKind::EdgeB => Family::B,
            VariableKind::EdgeC => Family::C,
            _ => return None,
        };
        Some(EdgeLabel::new(family, a as u32, b as u32))
    }
}

impl fmt::Debug for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.indices();
        match self.kind() {
            VariableKind::Vertex | VariableKind::Face | VariableKind::Aztec => {
                write!(f, "x_{{{a},{b},{c}}}")
            }
            VariableKind::EdgeA => write!(f, "a_{{{a},{b}}}"),
            VariableKind::EdgeB => write!(f, "b_{{{a},{b}}}"),
            VariableKind::EdgeC => write!(f, "c_{{{a},{b}}}"),
        }
    }
}

/// One signed term with its exponents; zero exponents are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentMonomial {
    pub coefficient: BigInt,
    pub exponents: BTreeMap<VariableId, i32>,
}

impl LaurentMonomial {
    pub fn new<I: IntoIterator<Item = (VariableId, i32)>>(coefficient: BigInt, exps: I) -> Self {
        let mut exponents = BTreeMap::new();
        for (v, e) in exps {
            *exponents.entry(v).or_insert(0) += e;
        }
        exponents.retain(|_, e| *e != 0);
        Self {
            coefficient,
            exponents,
        }
    }

    pub fn exponent(&self, v: VariableId) -> i32 {
        self.exponents.get(&v).copied().unwrap_or(0)
    }
}

impl fmt::Display for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        for (v, e) in &self.exponents {
            write!(f, " {v}^{e}")?;
        }
        Ok(())
    }
}

/// Dense term: exponent vector over the polynomial's registry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub exps: Box<[i8]>,
    pub coeff: BigInt,
}

/// Ordered variable list shared by all polynomials of one computation.
#[derive(Clone, Debug)]
pub(crate) struct Registry {
    pub vars: Arc<[VariableId]>,
    pub index: Arc<HashMap<VariableId, usize>>,
}

impl Registry {
    pub fn new(mut vars: Vec<VariableId>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        let index = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        Self {
            vars: vars.into(),
            index: Arc::new(index),
        }
    }

    pub fn width(&self) -> usize {
        self.vars.len()
    }

    pub fn unit(&self, exps: &[(VariableId, i8)]) -> Vec<i8> {
        let mut out = vec![0i8; self.width()];
        for (v, e) in exps {
            out[self.index[v]] += e;
        }
        out
    }

    pub fn constant(&self) -> Vec<Term> {
        vec![Term {
            exps: vec![0; self.width()].into(),
            coeff: BigInt::one(),
        }]
    }

    pub fn variable(&self, v: VariableId) -> Vec<Term> {
        vec![Term {
            exps: self.unit(&[(v, 1)]).into(),
            coeff: BigInt::one(),
        }]
    }
}

/// A Laurent polynomial with integer coefficients in canonical form.
#[derive(Clone)]
pub struct LaurentPolynomial {
    pub(crate) vars: Arc<[VariableId]>,
    /// Sorted by exponent vector, largest first; coefficients nonzero.
    pub(crate) terms: Vec<Term>,
}

impl LaurentPolynomial {
    pub(crate) fn from_terms(reg: &Registry, terms: Vec<Term>) -> Self {
        Self {
            vars: reg.vars.clone(),
            terms,
        }
    }

    /// Builds a polynomial from sparse monomials, merging equal terms.
    pub fn from_monomials<I: IntoIterator<Item = LaurentMonomial>>(monomials: I) -> Result<Self> {
        let monomials: Vec<LaurentMonomial> = monomials.into_iter().collect();
        let reg = Registry::new(
            monomials
                .iter()
                .flat_map(|m| m.exponents.keys().copied())
                .collect(),
        );
        let mut merged: BTreeMap<Vec<i8>, BigInt> = BTreeMap::new();
        for m in monomials {
            let mut exps = vec![0i8; reg.width()];
            for (v, e) in &m.exponents {
                exps[reg.index[v]] = i8::try_from(*e)
                    .map_err(|_| Error::MalformedTerm(format!("exponent {e} too large")))?;
            }
            *merged.entry(exps).or_insert_with(BigInt::zero) += m.coefficient;
        }
        let terms = merged
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, coeff)| Term {
                exps: e.into(),
                coeff,
            })
            .collect();
        Ok(Self::from_terms(&reg, terms))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn sparse(&self, t: &Term) -> LaurentMonomial {
        LaurentMonomial {
            coefficient: t.coeff.clone(),
            exponents: self
                .vars
                .iter()
                .zip(t.exps.iter())
                .filter(|(_, &e)| e != 0)
                .map(|(v, &e)| (*v, e as i32))
                .collect(),
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = LaurentMonomial> + '_ {
        self.terms.iter().map(|t| self.sparse(t))
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &BigInt> {
        self.terms.iter().map(|t| &t.coeff)
    }

    /// Variables actually occurring in some term.
    pub fn variables(&self) -> Vec<VariableId> {
        (0..self.vars.len())
            .filter(|&i| self.terms.iter().any(|t| t.exps[i] != 0))
            .map(|i| self.vars[i])
            .collect()
    }

    /// Coefficient of the monomial with the given exponents (zero if absent).
    pub fn coefficient_of(&self, exponents: &BTreeMap<VariableId, i32>) -> BigInt {
        let mut dense = vec![0i8; self.vars.len()];
        for (v, e) in exponents {
            match self.vars.iter().position(|x| x == v) {
                Some(i) => match i8::try_from(*e) {
                    Ok(e) => dense[i] = e,
                    Err(_) => return BigInt::zero(),
                },
                None => return BigInt::zero(),
            }
        }
        match self
            .terms
            .binary_search_by(|t| dense.as_slice().cmp(&t.exps))
        {
            Ok(i) => self.terms[i].coeff.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn contains(&self, m: &LaurentMonomial) -> bool {
        !self.coefficient_of(&m.exponents).is_zero()
    }

    /// Registry-independent form used for equality.
    pub fn canonical(&self) -> BTreeMap<Vec<(VariableId, i32)>, BigInt> {
        self.monomials()
            .map(|m| (m.exponents.into_iter().collect(), m.coefficient))
            .collect()
    }

    /// Difference `self - other` in canonical form.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        let negated = other.monomials().map(|mut m| {
            m.coefficient = -m.coefficient;
            m
        });
        Self::from_monomials(self.monomials().chain(negated))
    }

    /// One term per line: `coeff var^exp ...`.
    pub fn dump(&self) -> String {
        let mut lines: Vec<String> = self.monomials().map(|m| m.to_string()).collect();
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

impl PartialEq for LaurentPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial({} terms)", self.terms.len())
    }
}

/// Sum of products with machine-integer fast path.
#[derive(Default)]
struct Acc {
    small: i128,
    big: Option<BigInt>,
}

impl Acc {
    fn add_product(&mut self, sign: i8, a: &BigInt, b: &BigInt) {
        if self.big.is_none() {
            if let (Some(x), Some(y)) = (a.to_i64(), b.to_i64()) {
                let p = x as i128 * y as i128;
                let p = if sign < 0 { -p } else { p };
                if let Some(s) = self.small.checked_add(p) {
                    self.small = s;
                    return;
                }
            }
            self.big = Some(BigInt::from(self.small));
        }
        let p = a * b;
        let big = self.big.as_mut().unwrap();
        if sign < 0 {
            *big -= p;
        } else {
            *big += p;
        }
    }

    fn take(&mut self) -> BigInt {
        let out = match self.big.take() {
            Some(b) => b,
            None => BigInt::from(self.small),
        };
        self.small = 0;
        out
    }
}

/// Heap entry: the next unconsumed term of some product stream.
struct Entry {
    mono: Box<[i8]>,
    src: u32,
    i: u32,
    j: u32,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.mono == other.mono
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mono.cmp(&other.mono)
    }
}

/// `weight * left * right`; `weight` is a unit-coefficient monomial.
pub(crate) struct Product<'a> {
    pub weight: &'a [i8],
    pub left: &'a [Term],
    pub right: &'a [Term],
}

fn max_abs(terms: &[Term]) -> i32 {
    terms
        .iter()
        .flat_map(|t| t.exps.iter())
        .map(|&e| (e as i32).abs())
        .max()
        .unwrap_or(0)
}

fn add3(out: &mut [i8], w: &[i8], a: &[i8], b: &[i8]) {
    for k in 0..out.len() {
        out[k] = w[k].wrapping_add(a[k]).wrapping_add(b[k]);
    }
}

fn add2(out: &mut [i8], a: &[i8], b: &[i8]) {
    for k in 0..out.len() {
        out[k] = a[k].wrapping_add(b[k]);
    }
}

/// Exact quotient `(sum of products) / divisor`.
///
/// The dividend is never materialized: each product is a lazily merged
/// stream, and quotient terms are produced largest first. A quotient term
/// whose smallest multiple falls below every dividend term proves the
/// division is not exact.
pub(crate) fn divide_products(
    width: usize,
    products: &[Product<'_>],
    divisor: &[Term],
    term_cap: usize,
) -> Result<Vec<Term>> {
    let inexact = |msg: &str| Error::InexactDivision(msg.to_string());
    let d = divisor;
    if d.is_empty() {
        return Err(inexact("division by zero polynomial"));
    }

    // Streams: iterate the longer factor inside, seed one entry per term of
    // the shorter one.
    let mut streams: Vec<(&[i8], &[Term], &[Term])> = Vec::new();
    for p in products {
        if p.left.is_empty() || p.right.is_empty() {
            continue;
        }
        if max_abs(p.left) + max_abs(p.right) + p.weight.iter().map(|&e| (e as i32).abs()).max().unwrap_or(0)
            > i8::MAX as i32
        {
            return Err(inexact("exponent range exceeded"));
        }
        let (long, short) = if p.left.len() >= p.right.len() {
            (p.left, p.right)
        } else {
            (p.right, p.left)
        };
        streams.push((p.weight, long, short));
    }

    let mut lower: Option<Vec<i8>> = None;
    let mut dividend = BinaryHeap::new();
    for (s, (w, long, short)) in streams.iter().enumerate() {
        let mut last = vec![0i8; width];
        add3(&mut last, w, &long[long.len() - 1].exps, &short[short.len() - 1].exps);
        if lower.as_ref().is_none_or(|l| last < *l) {
            lower = Some(last);
        }
        for (j, t) in short.iter().enumerate() {
            let mut mono = vec![0i8; width];
            add3(&mut mono, w, &long[0].exps, &t.exps);
            dividend.push(Entry {
                mono: mono.into(),
                src: s as u32,
                i: 0,
                j: j as u32,
            });
        }
    }
    let Some(lower) = lower else {
        return Ok(Vec::new());
    };

    let d_max = max_abs(d);
    let d0 = &d[0];
    let d_last = &d[d.len() - 1].exps;
    let mut quotient: Vec<Term> = Vec::new();
    let mut q_heap: BinaryHeap<Entry> = BinaryHeap::new();
    let mut cur = vec![0i8; width];
    let mut acc = Acc::default();
    let mut scratch = vec![0i8; width];

    loop {
        let top = match (dividend.peek(), q_heap.peek()) {
            (None, None) => break,
            (Some(a), None) => &a.mono,
            (None, Some(b)) => &b.mono,
            (Some(a), Some(b)) => {
                if a.mono >= b.mono {
                    &a.mono
                } else {
                    &b.mono
                }
            }
        };
        cur.copy_from_slice(top);

        while let Some(mut e) = dividend.peek_mut() {
            if *e.mono != *cur {
                break;
            }
            let (w, long, short) = streams[e.src as usize];
            let (i, j) = (e.i as usize, e.j as usize);
            acc.add_product(1, &long[i].coeff, &short[j].coeff);
            if i + 1 < long.len() {
                add3(&mut e.mono, w, &long[i + 1].exps, &short[j].exps);
                e.i += 1;
            } else {
                PeekMut::pop(e);
            }
        }
        while let Some(mut e) = q_heap.peek_mut() {
            if *e.mono != *cur {
                break;
            }
            let (i, j) = (e.i as usize, e.j as usize);
            acc.add_product(-1, &quotient[i].coeff, &d[j].coeff);
            if j + 1 < d.len() {
                add2(&mut e.mono, &quotient[i].exps, &d[j + 1].exps);
                e.j += 1;
            } else {
                PeekMut::pop(e);
            }
        }

        let c = acc.take();
        if c.is_zero() {
            continue;
        }
        let (qc, rem) = c.div_rem(&d0.coeff);
        if !rem.is_zero() {
            return Err(inexact("coefficient not divisible"));
        }
        let mut qe = vec![0i8; width];
        for k in 0..width {
            let v = cur[k] as i32 - d0.exps[k] as i32;
            if v.abs() + d_max > i8::MAX as i32 {
                return Err(inexact("exponent range exceeded"));
            }
            qe[k] = v as i8;
        }
        add2(&mut scratch, &qe, d_last);
        if scratch < lower {
            return Err(inexact("nonzero remainder"));
        }
        if quotient.len() >= term_cap {
            return Err(inexact("quotient exceeds term cap"));
        }
        let qi = quotient.len();
        if d.len() > 1 {
            let mut mono = vec![0i8; width];
            add2(&mut mono, &qe, &d[1].exps);
            q_heap.push(Entry {
                mono: mono.into(),
                src: 0,
                i: qi as u32,
                j: 1,
            });
        }
        quotient.push(Term {
            exps: qe.into(),
            coeff: qc,
        });
    }
    Ok(quotient)
}

#[cfg(test)]
fn multiply(width: usize, a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut merged: BTreeMap<Vec<i8>, BigInt> = BTreeMap::new();
    let mut buf = vec![0i8; width];
    for x in a {
        for y in b {
            add2(&mut buf, &x.exps, &y.exps);
            *merged.entry(buf.clone()).or_insert_with(BigInt::zero) += &x.coeff * &y.coeff;
        }
    }
    merged
        .into_iter()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, coeff)| Term {
            exps: e.into(),
            coeff,
        })
        .collect()
}
