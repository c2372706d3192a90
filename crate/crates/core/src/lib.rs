//! Mutually orthogonal Latin squares, the net designs they induce, and the
//! mutually unbiased bases obtained from Weyl-Schwinger operator classes.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: small integer helpers (primality, factorisation, modular inverses).
//! - [`gf`]: arithmetic in GF(p^r), trace and trace-dual bases.
//! - [`squares`]: Latin squares, orthogonality, finite-field MOLS and MacNeish products.
//! - [`net`]: net designs built from a MOLS family and their representative cells.
//! - [`weyl`]: exact label arithmetic for `X^m Z^n`: symplectic form, commuting
//!   classes, prime-power digit decomposition and the CRT label split.
//! - [`spectra`]: dense complex matrices, the Jacobi Hermitian eigensolver and joint
//!   eigenbases of commuting classes.
//! - [`mub`]: unbiasedness checks, MUB extraction and the maximum-clique count.
//! - [`reproduce`]: the end-to-end reproduction checks used by the CLI report.

pub mod arith;
pub mod error;
pub mod gf;
pub mod mub;
pub mod net;
pub mod reproduce;
pub mod spectra;
pub mod squares;
pub mod weyl;

pub use error::{Error, Result};
pub use gf::{FieldBasis, FieldElement, FieldSpec};
pub use mub::{MubOptions, MubReport, UnbiasedGraph};
pub use net::{ExponentCell, NetDesign};
pub use spectra::{Basis, ComplexMatrix};
pub use squares::{LatinSquare, MolsFamily};
pub use weyl::{CommutingClass, Decomposition, ExponentPair, TensorLabel};
