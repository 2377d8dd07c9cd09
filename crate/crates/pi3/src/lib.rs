//! Exact computation of the third homotopy module of a finite 2-complex.
//!
//! Given a finite presentation of a finite group, the library enumerates the
//! group, builds the cellular chain complex of the universal cover via free
//! differential calculus, extracts the second homotopy module as an integer
//! lattice with G-action, and realizes the third homotopy module as the
//! symmetric square of that lattice.  Structural results (direct sum
//! splittings, stable comparisons, rational freeness, the half-integral
//! overlattice description) are produced together with machine-checkable
//! certificates: every isomorphism ships with explicit matrices that are
//! re-verified by multiplication.
//!
//! All arithmetic is exact, over `BigInt` and `BigRational`.

pub mod cert;
pub mod chain;
pub mod cli;
pub mod decomp;
pub mod group;
pub mod igstar;
pub mod lattice;
pub mod matrix;
pub mod symsq;
