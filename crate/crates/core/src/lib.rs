//! Closed-form spectra and eigenfunctions of the subgraphs of the Hamming
//! cube `{0,1}^n` induced by Hamming balls and by unions of concentric
//! Hamming spheres.
//!
//! The eigenvalues of the induced adjacency matrix `A(n, r1, r2)` are the
//! union over `t = 0..=r2` of the spectra of small zero-diagonal Jacobi
//! matrices `M_t`; in the ball case (`r1 = 0`) these are affine images of
//! Krawtchouk polynomial roots. Every closed form is cross-checked against a
//! dense brute-force eigendecomposition of the adjacency matrix.
//!
//! Modules:
//! - [`krawtchouk`]: exact Krawtchouk polynomials and certified roots.
//! - [`hamming`]: induced graphs, incidence matrices, the dense oracle.
//! - [`spectrum`]: the `M_t` matrices, full spectra with multiplicities.
//! - [`eigenfunctions`]: semi-symmetric bases and explicit eigenfunctions.
//! - [`bounds`]: entropy-parametrized bounds on maximal eigenvalues and
//!   fractional edge boundaries.

pub mod binom;
pub mod bounds;
pub mod eigenfunctions;
mod error;
pub mod hamming;
pub mod krawtchouk;
pub mod linalg;
pub mod spectrum;
pub mod tridiag;

pub use error::{Error, Result};

pub use bounds::BoundsReport;
pub use eigenfunctions::{EigenFunction, SemiSymBasis};
pub use hamming::{InducedGraph, Limits, OracleSpectrum};
pub use krawtchouk::{KrawtchoukPoly, RootList, RootSource};
pub use spectrum::{SpectrumLine, SpectrumTable, TridiagonalSym, VerifyReport};
