//! Chain-level algorithms for the Hochschild and cyclic cohomology of finite
//! band semigroup algebras.
//!
//! The crate covers band construction and decomposition ([`band`]), sparse
//! chains and cochains ([`chain`]), the unit-insertion operators behind
//! exactness of the reduced complex ([`exactness`]), tensor block
//! combinatorics ([`blocks`]), the cyclic-cocycle cobounding pipeline
//! ([`normalize`]) and a brute-force rank oracle ([`cohomology`]).
//!
//! Everything is generic over the coefficient field; [`Rat`] is the exact
//! instantiation used by the CLI and the tests.

pub mod algebra;
pub mod band;
pub mod blocks;
pub mod chain;
pub mod cohomology;
pub mod error;
pub mod exactness;
mod free_band;
pub mod io;
pub mod linalg;
pub mod normalize;
pub mod scalar;
pub mod verify;

pub use algebra::BandAlgebra;
pub use band::{Band, Decomposition, LcuMap};
pub use chain::{Chain, Cochain, ElemTensor};
pub use error::{Error, Result};
pub use free_band::{canonical_key, CanonicalKey};
pub use linalg::SparseMatrix;
pub use scalar::Scalar;

/// Exact rational coefficients.
pub type Rat = num_rational::BigRational;
pub type QChain = Chain<Rat>;
pub type QCochain = Cochain<Rat>;
pub type QMatrix = SparseMatrix<Rat>;
