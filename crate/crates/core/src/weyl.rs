//! Exact label arithmetic for the Weyl-Schwinger operators `X^m Z^n`.
//!
//! Using `Z X = η X Z` one gets `W(a) W(b) = η^{n_a m_b - m_a n_b} W(b) W(a)`, so two
//! operators commute exactly when the symplectic form of their labels vanishes mod `d`.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::{SerializeTuple, Serializer};
use serde::Serialize;

use crate::arith::{divisors, gcd, mod_inverse, prime_power};
use crate::error::{Error, Result};
use crate::gf::{coords, dual_basis, FieldBasis, FieldSpec};
use crate::net::ExponentCell;

/// Exponents `(m, n)` of `X^m Z^n` in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentPair {
    pub d: usize,
    pub m: usize,
    pub n: usize,
}

impl ExponentPair {
    /// Reduces both exponents mod `d`.
    pub fn new(d: usize, m: usize, n: usize) -> Self {
        Self { d, m: m % d, n: n % d }
    }

    pub fn identity(d: usize) -> Self {
        Self { d, m: 0, n: 0 }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.d, self.m + other.m, self.n + other.n)
    }

    pub fn scale(&self, k: usize) -> Self {
        Self::new(self.d, self.m * k, self.n * k)
    }

    pub fn is_identity(&self) -> bool {
        self.m == 0 && self.n == 0
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

impl Serialize for ExponentPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.m)?;
        t.serialize_element(&self.n)?;
        t.end()
    }
}

/// `(m_a n_b - n_a m_b) mod d`.
pub fn symplectic(a: &ExponentPair, b: &ExponentPair) -> Result<usize> {
    if a.d != b.d {
        return Err(Error::DimensionMismatch(a.d, b.d));
    }
    let d = a.d;
    Ok((a.m * b.n % d + d - a.n * b.m % d) % d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonCommuting {
    pub a: ExponentPair,
    pub b: ExponentPair,
    pub value: usize,
}

/// `None` when every pair of the cell commutes. Otherwise a witness: the first pair of
/// neighbouring entries (in cell order) that fails, or failing that the first failing
/// pair in scan order.
pub fn cell_commutes(cell: &ExponentCell) -> Option<NonCommuting> {
    let form = |a: &ExponentPair, b: &ExponentPair| symplectic(a, b).expect("cell pairs share d");
    cell.pairs
        .windows(2)
        .map(|w| (&w[0], &w[1], form(&w[0], &w[1])))
        .find(|t| t.2 != 0)
        .or_else(|| first_noncommuting(&cell.pairs, form))
        .map(|(a, b, value)| NonCommuting { a: *a, b: *b, value })
}

fn first_noncommuting<T>(items: &[T], form: impl Fn(&T, &T) -> usize) -> Option<(&T, &T, usize)> {
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            let v = form(a, b);
            if v != 0 {
                return Some((a, b, v));
            }
        }
    }
    None
}

/// An order-`d` isotropic subgroup of `Z_d × Z_d`, elements sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommutingClass {
    d: usize,
    elements: Vec<ExponentPair>,
}

impl CommutingClass {
    pub fn new(d: usize, elements: impl IntoIterator<Item = ExponentPair>) -> Result<Self> {
        let set: BTreeSet<ExponentPair> = elements.into_iter().collect();
        if let Some(e) = set.iter().find(|e| e.d != d) {
            return Err(Error::DimensionMismatch(d, e.d));
        }
        if set.len() != d {
            return Err(Error::Invalid(format!("class has {} elements, expected {d}", set.len())));
        }
        if !set.contains(&ExponentPair::identity(d)) {
            return Err(Error::Invalid("class does not contain the identity".into()));
        }
        for a in &set {
            for b in &set {
                if !set.contains(&a.add(b)) {
                    return Err(Error::Invalid(format!("{a} + {b} not in class")));
                }
                if symplectic(a, b)? != 0 {
                    return Err(Error::Invalid(format!("{a} and {b} do not commute")));
                }
            }
        }
        Ok(Self { d, elements: set.into_iter().collect() })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn elements(&self) -> &[ExponentPair] {
        &self.elements
    }

    /// A small generating set, picked greedily in element order.
    pub fn generators(&self) -> Vec<ExponentPair> {
        let mut gens = Vec::new();
        let mut span: BTreeSet<ExponentPair> = BTreeSet::from([ExponentPair::identity(self.d)]);
        for e in &self.elements {
            if span.contains(e) {
                continue;
            }
            gens.push(*e);
            let mut frontier: Vec<ExponentPair> = span.iter().copied().collect();
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    let y = x.add(g);
                    if span.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }

    /// `<(a,b),(c,d)>` rendering of the generators.
    pub fn label(&self) -> String {
        let gens: Vec<String> = self.generators().iter().map(ToString::to_string).collect();
        format!("<{}>", gens.join(","))
    }
}

impl Serialize for CommutingClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(serializer)
    }
}

pub const MAX_CLASS_DIMENSION: usize = 35;

/// Every order-`d` subgroup of `Z_d²` on which the symplectic form vanishes.
///
/// Order-`d` subgroups are exactly the lattices with Hermite basis `(a, b), (0, c)`
/// where `a·c = d` and `0 ≤ b < c`; for these the form is `a·c ≡ 0`, so every such
/// subgroup is isotropic and there are `σ(d)` of them.
pub fn enumerate_classes(d: usize) -> Result<Vec<CommutingClass>> {
    if !(2..=MAX_CLASS_DIMENSION).contains(&d) {
        return Err(Error::OutOfRange(d, "class enumeration supports 2 <= d <= 35"));
    }
    let mut classes = Vec::new();
    for a in divisors(d) {
        let c = d / a;
        for b in 0..c {
            let g1 = ExponentPair::new(d, a, b);
            let g2 = ExponentPair::new(d, 0, c);
            let elements = (0..c).flat_map(|i| (0..a).map(move |j| g1.scale(i).add(&g2.scale(j))));
            classes.push(CommutingClass::new(d, elements)?);
        }
    }
    classes.sort();
    classes.dedup();
    Ok(classes)
}

/// One tensor factor `X_p^m Z_p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TensorFactor {
    pub p: usize,
    pub m: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TensorLabel {
    pub factors: Vec<TensorFactor>,
}

impl TensorLabel {
    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|f| f.p).product()
    }
}

impl fmt::Display for TensorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|t| format!("({},{})", t.m, t.n)).collect();
        f.write_str(&parts.join("⊗"))
    }
}

/// `Σ_i (m_i n'_i - n_i m'_i) mod p` over factors of one characteristic.
pub fn tensor_symplectic(x: &TensorLabel, y: &TensorLabel) -> Result<usize> {
    if x.factors.len() != y.factors.len() {
        return Err(Error::DimensionMismatch(x.factors.len(), y.factors.len()));
    }
    let Some(p) = x.factors.first().map(|f| f.p) else {
        return Ok(0);
    };
    let mut acc = 0;
    for (a, b) in x.factors.iter().zip(&y.factors) {
        if a.p != p || b.p != p {
            return Err(Error::DimensionMismatch(a.p, b.p));
        }
        acc = (acc + a.m * b.n % p + p - a.n * b.m % p) % p;
    }
    Ok(acc)
}

/// Prime-power digit decomposition: `m` in basis `B`, `n` in its trace dual `B*`, so
/// that `Σ m_i n'_i = Tr(m·n')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    field: FieldSpec,
    basis: FieldBasis,
    dual: FieldBasis,
}

impl Decomposition {
    pub fn new(field: FieldSpec, basis: FieldBasis) -> Result<Self> {
        let dual = dual_basis(&field, &basis)?;
        Ok(Self { field, basis, dual })
    }

    /// Polynomial basis `{1, x, ...}` of the default field of order `q`.
    pub fn standard(q: usize) -> Result<Self> {
        let field = FieldSpec::with_order(q)?;
        let basis = field.polynomial_basis();
        Self::new(field, basis)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn basis(&self) -> &FieldBasis {
        &self.basis
    }

    pub fn dual(&self) -> &FieldBasis {
        &self.dual
    }

    pub fn apply(&self, pair: &ExponentPair) -> Result<TensorLabel> {
        let q = self.field.order();
        if pair.d != q {
            return Err(Error::DimensionMismatch(pair.d, q));
        }
        let p = self.field.characteristic();
        let ms = coords(&self.field, &self.field.from_index(pair.m), &self.basis);
        let ns = coords(&self.field, &self.field.from_index(pair.n), &self.dual);
        let factors = ms.into_iter().zip(ns).map(|(m, n)| TensorFactor { p, m, n }).collect();
        Ok(TensorLabel { factors })
    }
}

pub fn decompose_prime_power(pair: &ExponentPair, field: &FieldSpec, basis: &FieldBasis) -> Result<TensorLabel> {
    Decomposition::new(field.clone(), basis.clone())?.apply(pair)
}

/// Every cell's labels pairwise tensor-commute under `decomposition`.
pub fn cells_commute_under(decomposition: &Decomposition, cells: &[ExponentCell]) -> Result<bool> {
    for cell in cells {
        let labels = cell.pairs.iter().map(|p| decomposition.apply(p)).collect::<Result<Vec<_>>>()?;
        if first_noncommuting(&labels, |a, b| tensor_symplectic(a, b).unwrap_or(1)).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tries the power bases `{1, a, ..., a^{r-1}}` in element order and returns the first
/// decomposition under which every cell commutes.
pub fn search_decomposition(field: &FieldSpec, cells: &[ExponentCell]) -> Result<Decomposition> {
    for a in field.elements() {
        let Ok(basis) = field.power_basis(&a) else { continue };
        let candidate = Decomposition::new(field.clone(), basis)?;
        if cells_commute_under(&candidate, cells)? {
            return Ok(candidate);
        }
    }
    Err(Error::NoCommutingDecomposition)
}

/// Checks that `d` is a prime power and returns the matching standard decomposition.
pub fn standard_decomposition_for(d: usize) -> Result<Decomposition> {
    prime_power(d).ok_or(Error::NotPrimePower(d))?;
    Decomposition::standard(d)
}

/// Label map induced by the CRT permutation `T`: `m_i = m mod d_i`,
/// `n_i = s·n mod d_i` with `s = (d1 + d2)^{-1} mod d1·d2`.
pub fn crt_split(pair: &ExponentPair, d1: usize, d2: usize) -> Result<(ExponentPair, ExponentPair)> {
    let s = crt_scale(pair.d, d1, d2)?;
    let n = pair.n * s % pair.d;
    Ok((ExponentPair::new(d1, pair.m, n), ExponentPair::new(d2, pair.m, n)))
}

/// Inverse of [`crt_split`].
pub fn crt_join(first: &ExponentPair, second: &ExponentPair) -> Result<ExponentPair> {
    let (d1, d2) = (first.d, second.d);
    let d = d1 * d2;
    crt_scale(d, d1, d2)?;
    let m = crt_combine(first.m, d1, second.m, d2);
    let n = crt_combine(first.n, d1, second.n, d2) * ((d1 + d2) % d) % d;
    Ok(ExponentPair::new(d, m, n))
}

fn crt_scale(d: usize, d1: usize, d2: usize) -> Result<usize> {
    if gcd(d1, d2) != 1 {
        return Err(Error::NotCoprime(d1, d2));
    }
    if d1 * d2 != d {
        return Err(Error::DimensionMismatch(d, d1 * d2));
    }
    if d == 1 {
        return Ok(0);
    }
    Ok(mod_inverse((d1 + d2) % d, d).expect("d1 + d2 is a unit mod d1·d2 for coprime factors"))
}

fn crt_combine(x1: usize, d1: usize, x2: usize, d2: usize) -> usize {
    (0..d1 * d2).find(|&x| x % d1 == x1 % d1 && x % d2 == x2 % d2).expect("coprime moduli")
}
