//! Exact enumerative and cohomological invariants of subspace arrangements.
//!
//! Arrangements are given by groups of linear forms over the integers or over
//! a prime field. From them the crate builds the intersection semilattice,
//! its Möbius function and order-complex homology, and derives characteristic
//! polynomials, zeta function factorizations and Frobenius weight profiles.
//! Every formula can be checked against the brute-force point counter in
//! [`oracle`].
//!
//! With the `parallel` feature (on by default) the heavy loops run on rayon;
//! without it, or with [`exec::Strategy::Sequential`], everything runs on the
//! calling thread and produces identical results.

pub mod algebra;
pub mod arrangement;
pub mod cli;
pub mod enumerative;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod topology;

pub use error::{Error, Result};
