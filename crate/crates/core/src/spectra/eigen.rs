//! Cyclic complex Jacobi diagonalisation and joint eigenbases of commuting unitaries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const ORTHONORMAL_TOL: f64 = 1e-10;
pub const JACOBI_OFFDIAG_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
pub const VECTOR_RESIDUAL_TOL: f64 = 1e-9;
pub const COEFFICIENT_REDRAWS: usize = 5;

/// Orthonormal basis stored as the columns of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Basis {
    vectors: ComplexMatrix,
}

impl Basis {
    /// Accepts the columns of `vectors` if their Gram matrix is within 1e-10 of identity.
    pub fn new(vectors: ComplexMatrix) -> Result<Self> {
        let dev = vectors.unitarity_deviation();
        if dev > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { vectors })
    }

    pub fn computational(dim: usize) -> Self {
        Self { vectors: ComplexMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.vectors.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.vectors.column(j)
    }

    /// Rank-one projectors `|v⟩⟨v|`, one per column.
    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        (0..self.dim())
            .map(|j| {
                let v = self.vector(j);
                ComplexMatrix::from_fn(self.dim(), |a, b| v[a] * v[b].conj())
            })
            .collect()
    }

    /// Kronecker product of the two bases, columns in `(i1, i2)` order.
    pub fn tensor(&self, other: &Basis) -> Basis {
        Basis { vectors: self.vectors.kron(&other.vectors) }
    }

    /// Rotates every column so its first non-negligible entry is real and positive.
    fn with_canonical_phases(mut self) -> Self {
        let n = self.dim();
        for j in 0..n {
            if let Some(z) = (0..n).map(|i| self.vectors[(i, j)]).find(|z| z.norm() > 1e-8) {
                let phase = z.conj() / z.norm();
                for i in 0..n {
                    self.vectors[(i, j)] *= phase;
                }
            }
        }
        self
    }
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<(Vec<f64>, Basis)> {
    let dev = h.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = h.dim();
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFFDIAG_TOL * h.max_abs().max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_max(&a) < threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let off = off_diagonal_max(&a);
    if off >= threshold {
        return Err(Error::ResidualFailure(off));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let columns: Vec<Vec<Complex64>> = order.iter().map(|&i| v.column(i)).collect();
    Ok((values, Basis::new(ComplexMatrix::from_columns(&columns))?))
}

fn off_diagonal_max(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut m = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// Zeroes `a[p][q]` with the unitary `G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let h = a[(p, q)];
    let g = h.norm();
    if g < f64::MIN_POSITIVE {
        return;
    }
    let phase = (h / g).conj();
    let theta = 0.5 * (2.0 * g).atan2(a[(q, q)].re - a[(p, p)].re);
    let (s, c) = theta.sin_cos();
    let g00 = Complex64::new(c, 0.0);
    let g01 = Complex64::new(s, 0.0);
    let g10 = phase * -s;
    let g11 = phase * c;
    let n = a.dim();
    for k in 0..n {
        let (xp, xq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = xp * g00 + xq * g10;
        a[(k, q)] = xp * g01 + xq * g11;
        let (yp, yq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = yp * g00 + yq * g10;
        v[(k, q)] = yp * g01 + yq * g11;
    }
    for k in 0..n {
        let (xp, xq) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g00.conj() * xp + g10.conj() * xq;
        a[(q, k)] = g01.conj() * xp + g11.conj() * xq;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Mixes `seed` with a class index so every class gets its own coefficient stream.
pub fn class_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Joint eigenbasis of pairwise commuting unitaries.
///
/// Diagonalises `H = Σ_k (c_k U_k + c̄_k U_k†)` for pseudorandom `c_k`, then checks every
/// column against every operator. Fails with [`Error::Degenerate`] when two columns
/// share an eigenvalue tuple, i.e. some joint eigenspace is not one-dimensional.
pub fn joint_eigenbasis(ops: &[ComplexMatrix], seed: u64) -> Result<Basis> {
    let Some(first) = ops.first() else {
        return Err(Error::Invalid("no operators".into()));
    };
    let n = first.dim();
    if let Some(op) = ops.iter().find(|op| op.dim() != n) {
        return Err(Error::DimensionMismatch(n, op.dim()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_error = Error::Degenerate;
    for _ in 0..=COEFFICIENT_REDRAWS {
        let scale = 1.0 / ops.len() as f64;
        let mut h = ComplexMatrix::zeros(n);
        for op in ops {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale;
            h = h.add(&op.scale(c)).add(&op.adjoint().scale(c.conj()));
        }
        let (_, basis) = match hermitian_eigensystem(&h) {
            Ok(r) => r,
            Err(e) => {
                last_error = e;
                continue;
            }
        };
        match verify_joint(ops, &basis) {
            Ok(()) => return Ok(basis.with_canonical_phases()),
            Err(e) => last_error = e,
        }
    }
    Err(last_error)
}

/// Eigenvalue of `op` on each column of `basis`, or the worst residual when some column is
/// not an eigenvector within [`VECTOR_RESIDUAL_TOL`].
pub fn eigenvalues_on(op: &ComplexMatrix, basis: &Basis) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(basis.dim());
    for j in 0..basis.dim() {
        let v = basis.vector(j);
        let uv = op.apply(&v);
        let lambda: Complex64 = v.iter().zip(&uv).map(|(a, b)| a.conj() * b).sum();
        let residual = uv.iter().zip(&v).map(|(x, y)| (x - lambda * y).norm()).fold(0.0, f64::max);
        if residual > VECTOR_RESIDUAL_TOL || (lambda.norm() - 1.0).abs() > VECTOR_RESIDUAL_TOL {
            return Err(Error::ResidualFailure(residual.max((lambda.norm() - 1.0).abs())));
        }
        out.push(lambda);
    }
    Ok(out)
}

fn verify_joint(ops: &[ComplexMatrix], basis: &Basis) -> Result<()> {
    let tuples = ops.iter().map(|op| eigenvalues_on(op, basis)).collect::<Result<Vec<_>>>()?;
    let n = basis.dim();
    for i in 0..n {
        for j in i + 1..n {
            if tuples.iter().all(|vals| (vals[i] - vals[j]).norm() < 1e-6) {
                return Err(Error::Degenerate);
            }
        }
    }
    Ok(())
}

/// Largest eigen-residual of `basis` over `ops`, for reporting.
pub fn max_residual(ops: &[ComplexMatrix], basis: &Basis) -> f64 {
    let mut worst = 0.0f64;
    for op in ops {
        for j in 0..basis.dim() {
            let v = basis.vector(j);
            let uv = op.apply(&v);
            let lambda: Complex64 = v.iter().zip(&uv).map(|(a, b)| a.conj() * b).sum();
            let r = uv.iter().zip(&v).map(|(x, y)| (x - lambda * y).norm()).fold(0.0, f64::max);
            worst = worst.max(r);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(h: &ComplexMatrix, values: &[f64], basis: &Basis) -> f64 {
        let v = basis.matrix();
        let lambda: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        h.matmul(v).max_abs_diff(&v.matmul(&ComplexMatrix::diagonal(&lambda)))
    }

    #[test]
    fn diagonal_input() {
        let d: Vec<Complex64> = [3.0, -1.0, 2.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let (values, basis) = hermitian_eigensystem(&ComplexMatrix::diagonal(&d)).unwrap();
        assert_eq!(values, vec![-1.0, 2.0, 3.0]);
        assert!(basis.matrix().is_permutation(0.0));
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_fn(2, |i, j| Complex64::new(f64::from(u8::from(i != j)), 0.0));
        let (values, basis) = hermitian_eigensystem(&x).unwrap();
        assert!((values[0] + 1.0).abs() < 1e-14 && (values[1] - 1.0).abs() < 1e-14);
        assert!(residual(&x, &values, &basis) < 1e-12);
    }

    #[test]
    fn random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 5, 10, 20] {
            let entries: Vec<Complex64> =
                (0..n * n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let g = ComplexMatrix::from_fn(n, |i, j| entries[i * n + j]);
            let h = g.add(&g.adjoint());
            let (values, basis) = hermitian_eigensystem(&h).unwrap();
            assert!(residual(&h, &values, &basis) < 1e-10, "n={n}");
            assert!(basis.matrix().unitarity_deviation() < 1e-10);
            assert!(values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_fn(2, |i, j| Complex64::new((i * 2 + j) as f64, 0.0));
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn basis_rejects_non_orthonormal() {
        let m = ComplexMatrix::from_fn(2, |_, _| Complex64::new(1.0, 0.0));
        assert!(matches!(Basis::new(m), Err(Error::NotOrthonormal(_))));
    }

    #[test]
    fn seeds_differ_per_class() {
        assert_ne!(class_seed(0, 0), class_seed(0, 1));
        assert_ne!(class_seed(0, 0), class_seed(1, 0));
        assert_eq!(class_seed(3, 4), class_seed(3, 4));
    }
}
