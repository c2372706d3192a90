//! Matrix realisations of the Weyl-Schwinger operators and their joint eigenbases.

mod eigen;
mod matrix;

pub use eigen::{
    class_seed, eigenvalues_on, hermitian_eigensystem, joint_eigenbasis, max_residual, Basis, COEFFICIENT_REDRAWS,
    JACOBI_MAX_SWEEPS, JACOBI_OFFDIAG_TOL, VECTOR_RESIDUAL_TOL,
};
pub use matrix::ComplexMatrix;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::weyl::{CommutingClass, ExponentPair, TensorLabel};

/// Tolerance for exact-structure checks (permutations, roots of unity, the CRT lemma).
pub const STRUCTURE_TOL: f64 = 1e-12;

/// `η^k` with `η = exp(2πi/d)`, exponent reduced mod `d` first.
pub fn root_of_unity(d: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % d) as f64 / d as f64)
}

/// Clock operator `Z|κ⟩ = η^κ |κ⟩`.
pub fn build_z(d: usize) -> ComplexMatrix {
    let diag: Vec<Complex64> = (0..d).map(|k| root_of_unity(d, k)).collect();
    ComplexMatrix::diagonal(&diag)
}

/// Shift operator `X|κ⟩ = |κ+1 mod d⟩`.
pub fn build_x(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |i, j| if i == (j + 1) % d { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

/// `X^m Z^n`, which maps `|κ⟩` to `η^{nκ} |κ+m⟩`.
pub fn weyl_matrix(pair: &ExponentPair) -> ComplexMatrix {
    let d = pair.d;
    let mut out = ComplexMatrix::zeros(d);
    for k in 0..d {
        out[((k + pair.m) % d, k)] = root_of_unity(d, pair.n * k);
    }
    out
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// `⊗_i X_{p_i}^{m_i} Z_{p_i}^{n_i}`, first factor most significant.
pub fn tensor_weyl(label: &TensorLabel) -> ComplexMatrix {
    label
        .factors
        .iter()
        .map(|f| weyl_matrix(&ExponentPair::new(f.p, f.m, f.n)))
        .fold(ComplexMatrix::identity(1), |acc, m| acc.kron(&m))
}

/// `T|j⟩ = |(j mod d1)·d2 + (j mod d2)⟩`.
pub fn permutation_t(d1: usize, d2: usize) -> Result<ComplexMatrix> {
    if gcd(d1, d2) != 1 {
        return Err(Error::NotCoprime(d1, d2));
    }
    let d = d1 * d2;
    let mut t = ComplexMatrix::zeros(d);
    for j in 0..d {
        t[((j % d1) * d2 + j % d2, j)] = Complex64::new(1.0, 0.0);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaReport {
    pub d1: usize,
    pub d2: usize,
    /// `max |T X_d T⁻¹ - X_{d1} ⊗ X_{d2}|`
    pub x_deviation: f64,
    /// `max |T Z_d^{d1+d2} T⁻¹ - Z_{d1} ⊗ Z_{d2}|`
    pub z_deviation: f64,
}

impl LemmaReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.x_deviation < tol && self.z_deviation < tol
    }
}

/// Checks both conjugation identities for the CRT permutation numerically.
pub fn lemma_verify(d1: usize, d2: usize) -> Result<LemmaReport> {
    let t = permutation_t(d1, d2)?;
    let t_inv = t.transpose();
    let d = d1 * d2;
    let conj = |m: &ComplexMatrix| t.matmul(m).matmul(&t_inv);
    let x_deviation = conj(&build_x(d)).max_abs_diff(&build_x(d1).kron(&build_x(d2)));
    let z_deviation =
        conj(&weyl_matrix(&ExponentPair::new(d, 0, d1 + d2))).max_abs_diff(&build_z(d1).kron(&build_z(d2)));
    Ok(LemmaReport { d1, d2, x_deviation, z_deviation })
}

/// Joint eigenbasis of a commuting class; `seed` should come from [`class_seed`].
pub fn common_eigenbasis(class: &CommutingClass, seed: u64) -> Result<Basis> {
    joint_eigenbasis(&class_operators(class), seed)
}

/// Matrices of the non-identity class elements.
pub fn class_operators(class: &CommutingClass) -> Vec<ComplexMatrix> {
    class.elements().iter().filter(|e| !e.is_identity()).map(weyl_matrix).collect()
}
