//! Arithmetic in GF(p^r) with elements stored as coefficient vectors.
//!
//! An element is a polynomial `c_0 + c_1 x + ... + c_{r-1} x^{r-1}` reduced modulo a
//! monic irreducible polynomial of degree `r`. Integers `0..q` are identified with
//! field elements through their base-`p` digits: `Σ c_k p^k ↔ Σ c_k x^k`.

use crate::arith::{is_prime, prime_power};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: usize,
    r: usize,
    /// Modulus coefficients, lowest degree first, length `r + 1`, monic.
    modulus: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<usize>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[usize] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// `r` field elements, linearly independent over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldBasis {
    elements: Vec<FieldElement>,
}

impl FieldBasis {
    pub fn new(field: &FieldSpec, elements: Vec<FieldElement>) -> Result<Self> {
        if elements.len() != field.r {
            return Err(Error::DependentBasis);
        }
        for e in &elements {
            field.check(e)?;
        }
        let columns: Vec<Vec<usize>> = elements.iter().map(|e| e.coeffs.clone()).collect();
        if rank_mod_p(&columns, field.r, field.p) != field.r {
            return Err(Error::DependentBasis);
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }
}

impl FieldSpec {
    /// Field with the given characteristic and modulus (lowest degree first).
    pub fn new(p: usize, modulus: Vec<usize>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!("coefficients must lie in 0..{p}")));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus(format!("{modulus:?} is reducible over GF({p})")));
        }
        let r = modulus.len() - 1;
        Ok(Self { p, r, modulus })
    }

    /// GF(q) with a fixed default modulus: `x^2+x+1` for q=4, `x^3+x+1` for q=8,
    /// `x^2+1` for q=9, `x` for primes, otherwise the first irreducible in
    /// lexicographic coefficient order.
    pub fn with_order(q: usize) -> Result<Self> {
        let (p, r) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let modulus = match q {
            4 => vec![1, 1, 1],
            8 => vec![1, 1, 0, 1],
            9 => vec![1, 0, 1],
            _ if r == 1 => vec![0, 1],
            _ => first_irreducible(p, r as usize),
        };
        Self::new(p, modulus)
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> usize {
        self.p.pow(self.r as u32)
    }

    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }

    pub fn element(&self, coeffs: Vec<usize>) -> Result<FieldElement> {
        let e = FieldElement { coeffs };
        self.check(&e)?;
        Ok(e)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.r] }
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    pub fn constant(&self, c: usize) -> FieldElement {
        let mut coeffs = vec![0; self.r];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// Element whose base-`p` digits are the coefficients of `index`.
    pub fn from_index(&self, mut index: usize) -> FieldElement {
        let mut coeffs = vec![0; self.r];
        for c in coeffs.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        FieldElement { coeffs }
    }

    pub fn index_of(&self, x: &FieldElement) -> usize {
        x.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(|i| self.from_index(i))
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| (a + b) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        let coeffs = x.coeffs.iter().map(|&a| (self.p - a) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, c: usize, x: &FieldElement) -> FieldElement {
        let coeffs = x.coeffs.iter().map(|&a| a * (c % self.p) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let (p, r) = (self.p, self.r);
        let mut prod = vec![0usize; 2 * r - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // reduce from the top using the monic modulus
        for k in (r..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (t, &m) in self.modulus[..r].iter().enumerate() {
                let idx = k - r + t;
                prod[idx] = (prod[idx] + (p - c) * m) % p;
            }
        }
        prod.truncate(r);
        FieldElement { coeffs: prod }
    }

    pub fn pow(&self, x: &FieldElement, mut e: usize) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.order() - 2))
    }

    /// Absolute trace `Σ_{i<r} x^{p^i}`, returned as an element of the prime field.
    pub fn trace(&self, x: &FieldElement) -> usize {
        let mut acc = self.zero();
        let mut conj = x.clone();
        for _ in 0..self.r {
            acc = self.add(&acc, &conj);
            conj = self.pow(&conj, self.p);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// The basis `{1, x, ..., x^{r-1}}`.
    pub fn polynomial_basis(&self) -> FieldBasis {
        let elements = (0..self.r)
            .map(|k| {
                let mut coeffs = vec![0; self.r];
                coeffs[k] = 1;
                FieldElement { coeffs }
            })
            .collect();
        FieldBasis { elements }
    }

    /// Basis `{1, a, ..., a^{r-1}}`, if those powers are independent.
    pub fn power_basis(&self, a: &FieldElement) -> Result<FieldBasis> {
        let elements = (0..self.r).map(|k| self.pow(a, k)).collect();
        FieldBasis::new(self, elements)
    }

    /// Rebuilds `Σ c_i e_i` from coordinates.
    pub fn from_coords(&self, coords: &[usize], basis: &FieldBasis) -> FieldElement {
        coords.iter().zip(&basis.elements).fold(self.zero(), |acc, (&c, e)| self.add(&acc, &self.scale(c, e)))
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if x.coeffs.len() != self.r || x.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::ForeignElement);
        }
        Ok(())
    }
}

/// Coordinates of `x` in `basis`: the unique vector `c` over GF(p) with `x = Σ c_i e_i`.
pub fn coords(field: &FieldSpec, x: &FieldElement, basis: &FieldBasis) -> Vec<usize> {
    let columns: Vec<Vec<usize>> = basis.elements.iter().map(|e| e.coeffs.clone()).collect();
    solve_mod_p(&columns, &x.coeffs, field.p).expect("basis is invertible by construction")
}

/// The trace-dual basis: `Tr(e_i · ẽ_j) = δ_ij`.
pub fn dual_basis(field: &FieldSpec, basis: &FieldBasis) -> Result<FieldBasis> {
    let r = field.r;
    if basis.elements.len() != r {
        return Err(Error::DependentBasis);
    }
    let poly = field.polynomial_basis();
    // columns[k][i] = Tr(e_i x^k); unknown ẽ_j = Σ_k y_k x^k
    let columns: Vec<Vec<usize>> = poly
        .elements
        .iter()
        .map(|xk| basis.elements.iter().map(|e| field.trace(&field.mul(e, xk))).collect())
        .collect();
    let mut dual = Vec::with_capacity(r);
    for j in 0..r {
        let mut rhs = vec![0; r];
        rhs[j] = 1;
        let y = solve_mod_p(&columns, &rhs, field.p).ok_or(Error::DependentBasis)?;
        dual.push(field.from_coords(&y, &poly));
    }
    FieldBasis::new(field, dual)
}

fn first_irreducible(p: usize, r: usize) -> Vec<usize> {
    let count = p.pow(r as u32);
    (0..count)
        .map(|i| {
            let mut m: Vec<usize> = (0..r).map(|k| i / p.pow(k as u32) % p).collect();
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

fn is_irreducible(modulus: &[usize], p: usize) -> bool {
    let deg = modulus.len() - 1;
    for fdeg in 1..=deg / 2 {
        for i in 0..p.pow(fdeg as u32) {
            let mut f: Vec<usize> = (0..fdeg).map(|k| i / p.pow(k as u32) % p).collect();
            f.push(1);
            if poly_rem(modulus, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `a` by monic `b` over GF(p).
fn poly_rem(a: &[usize], b: &[usize], p: usize) -> Vec<usize> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    while rem.len() > db {
        let c = rem.pop().unwrap();
        let shift = rem.len() - db;
        for (t, &bt) in b[..db].iter().enumerate() {
            rem[shift + t] = (rem[shift + t] + (p - c) * bt % p) % p;
        }
    }
    rem
}

fn reduce_rows(columns: &[Vec<usize>], rows: usize, p: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    // row-major copy of the matrix whose columns are given
    let cols = columns.len();
    let mut m: Vec<Vec<usize>> = (0..rows).map(|i| (0..cols).map(|j| columns[j][i] % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, piv);
        let inv = crate::arith::mod_inverse(m[row][col], p).unwrap();
        for v in m[row].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && r[col] != 0 {
                let f = r[col];
                for (v, &w) in r.iter_mut().zip(&pivot) {
                    *v = (*v + (p - f) * w) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    (m, pivots)
}

fn rank_mod_p(columns: &[Vec<usize>], rows: usize, p: usize) -> usize {
    reduce_rows(columns, rows, p).1.len()
}

/// Solves the square system `[columns] · y = rhs` over GF(p).
fn solve_mod_p(columns: &[Vec<usize>], rhs: &[usize], p: usize) -> Option<Vec<usize>> {
    let n = rhs.len();
    let mut augmented = columns.to_vec();
    augmented.push(rhs.to_vec());
    let (m, pivots) = reduce_rows(&augmented, n, p);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some((0..n).map(|i| m[i][n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDERS: [usize; 6] = [2, 3, 4, 5, 8, 9];

    #[test]
    fn small_examples() {
        let f2 = FieldSpec::with_order(2).unwrap();
        assert_eq!(f2.add(&f2.one(), &f2.one()), f2.zero());
        assert_eq!(f2.trace(&f2.one()), 1);

        let f4 = FieldSpec::with_order(4).unwrap();
        let x = f4.element(vec![0, 1]).unwrap();
        // x^2 = -x - 1 = x + 1 modulo x^2+x+1
        assert_eq!(f4.mul(&x, &x), f4.element(vec![1, 1]).unwrap());
        assert_eq!(f4.trace(&x), 1);

        let f5 = FieldSpec::with_order(5).unwrap();
        assert_eq!(f5.inv(&f5.constant(2)).unwrap(), f5.constant(3));
        assert_eq!(f5.inv(&f5.zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(FieldSpec::with_order(6), Err(Error::NotPrimePower(6))));
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert!(FieldSpec::new(2, vec![1, 0, 1]).is_err());
        assert!(FieldSpec::new(3, vec![1, 0, 2]).is_err());
        assert!(FieldSpec::new(4, vec![1, 1]).is_err());
        assert!(FieldSpec::new(3, vec![2, 0, 1]).is_err()); // x^2 - 1
        assert!(FieldSpec::with_order(27).is_ok());
        assert!(FieldSpec::with_order(25).is_ok());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in ORDERS {
            let f = FieldSpec::with_order(q).unwrap();
            let all: Vec<_> = f.elements().collect();
            for a in &all {
                assert_eq!(f.add(a, &f.zero()), *a);
                assert_eq!(f.mul(a, &f.one()), *a);
                assert_eq!(f.add(a, &f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, &f.inv(a).unwrap()), f.one(), "q={q}");
                }
                for b in &all {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if !a.is_zero() && !b.is_zero() {
                        assert!(!f.mul(a, b).is_zero());
                    }
                    for c in all.iter().step_by(if q > 5 { 3 } else { 1 }) {
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                        assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_is_linear_into_prime_field() {
        for q in ORDERS {
            let f = FieldSpec::with_order(q).unwrap();
            assert_eq!(f.trace(&f.zero()), 0);
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.trace(&f.add(&a, &b));
                    assert_eq!(lhs, (f.trace(&a) + f.trace(&b)) % f.characteristic());
                }
            }
        }
    }

    fn check_dual(f: &FieldSpec, b: &FieldBasis) {
        let dual = dual_basis(f, b).unwrap();
        for (i, e) in b.elements().iter().enumerate() {
            for (j, d) in dual.elements().iter().enumerate() {
                assert_eq!(f.trace(&f.mul(e, d)), usize::from(i == j));
            }
        }
        assert_eq!(dual_basis(f, &dual).unwrap(), *b);
    }

    #[test]
    fn dual_bases() {
        let f2 = FieldSpec::with_order(2).unwrap();
        let b = f2.polynomial_basis();
        assert_eq!(dual_basis(&f2, &b).unwrap(), b);

        let f4 = FieldSpec::with_order(4).unwrap();
        let dual = dual_basis(&f4, &f4.polynomial_basis()).unwrap();
        // {1, x} is dual to {1+x, 1}
        assert_eq!(dual.elements()[0], f4.element(vec![1, 1]).unwrap());
        assert_eq!(dual.elements()[1], f4.one());

        for q in ORDERS {
            let f = FieldSpec::with_order(q).unwrap();
            check_dual(&f, &f.polynomial_basis());
            for a in f.elements() {
                if let Ok(b) = f.power_basis(&a) {
                    check_dual(&f, &b);
                }
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let f4 = FieldSpec::with_order(4).unwrap();
        let b = f4.polynomial_basis();
        assert_eq!(coords(&f4, &f4.element(vec![1, 1]).unwrap(), &b), vec![1, 1]);
        assert_eq!(coords(&f4, &f4.zero(), &b), vec![0, 0]);

        let f9 = FieldSpec::with_order(9).unwrap();
        let x = f9.element(vec![1, 1]).unwrap();
        let b = f9.power_basis(&x).unwrap();
        let mut seen = std::collections::HashSet::new();
        for e in f9.elements() {
            let c = coords(&f9, &e, &b);
            assert_eq!(f9.from_coords(&c, &b), e);
            assert!(seen.insert(c));
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn dependent_basis_rejected() {
        let f9 = FieldSpec::with_order(9).unwrap();
        let one = f9.one();
        let two = f9.constant(2);
        assert_eq!(FieldBasis::new(&f9, vec![one, two]), Err(Error::DependentBasis));
    }
}
