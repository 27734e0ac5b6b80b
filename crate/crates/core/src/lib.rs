//! Exact computation with q-matroids over small finite fields.
//!
//! A q-matroid is a finite-dimensional vector space over GF(q) together with
//! an integer rank function on its subspace lattice satisfying boundedness,
//! monotonicity and submodularity. This crate enumerates subspace lattices
//! exactly, verifies the axioms exhaustively, and implements the standard
//! constructions on top of them: duality, minors, matroid union and
//! intersection, loop extension and the direct sum, plus representability
//! from generator matrices over extension fields, connectedness relations,
//! and exhaustive catalogue generation for small parameters.

// indexed loops read better than iterator chains in the matrix kernels
#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod construct;
pub mod error;
pub mod gf;
pub mod io;
pub mod lattice;
pub mod matroid;
pub mod repr;

pub use matroid::{AxiomReport, Bicolouring, CircuitAxiomReport, DerivedFamilies, QMatroid};
pub use error::{Error, Result};
pub use gf::{FieldElem, FieldSpec};
pub use lattice::{LatticeIso, Perp, Subspace, SubspaceLattice};

